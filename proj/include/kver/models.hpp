#pragma once

// The chart catalog. Three families:
//
//   cpn-radial        Fubini-Study affine chart of complex dimension n with
//                     the radial potential tau = c + s|z|^2 / (1+|z|^2); the
//                     two-eigenvalue tensor S vanishes on span{grad tau,
//                     J grad tau} and acts as (tau - c) on its complement.
//
//   product           Sigma x N with both factors Fubini-Study charts; S has
//                     constant eigenvalues 0 on T Sigma and mu0 on T N.
//
//   calabi            warped line-bundle-type chart over a Fubini-Study base
//                     with coordinates (tau, t, base), metric
//                     (tau - c) g_N + dtau^2 / Q + Q eta^2 and a momentum
//                     profile Q(tau).
//
// Every constructor validates its chart (positive metric, the four Kahler
// residuals, and for calabi the defining relations) and throws rather than
// returning a broken model.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kver/chart.hpp"
#include "kver/profile.hpp"

namespace kver {

MatD standard_complex_structure(int dim);

ChartDomain make_flat_chart(int dim, double half_width = 1.0);

// Bare Fubini-Study affine chart (metric, J, omega, potential), any n >= 1.
ChartDomain make_fs_chart(int n, double scale = 4.0, double half_width = 0.8);

enum class ModelFamily { fs_radial, product, calabi };

struct Model {
  std::string id;
  ModelFamily family = ModelFamily::fs_radial;
  int dim = 4;
  double c = 0.0;                  // tau value at the degenerate point
  double a = 0.0;                  // endpoint slope parameter, |dQ/dtau| = 2a
  bool has_potential = false;      // tau / Q / phi registered
  bool mu_constant = false;
  double mu0 = 0.0;                // products: the constant eigenvalue
  double exclusion_radius = 0.0;   // gap-sensitive suites skip |u| < this
  Box geodesic_start;
  std::map<std::string, double> params;
  std::optional<MomentumProfile> profile;
  ChartDomain chart;

  // Registered field names (when present):
  //   scalars: "tau", "mu", "Q"; endos: "S", "PV", "PH";
  //   two-forms: "phi", "omega"; vectors: "xi", "V1", "V2".
};

struct FsParams {
  int n = 2;
  double scale = 4.0;
  double c = 0.0;
  double half_width = 0.8;
};

struct ProductParams {
  double sigma_scale = 4.0;
  int n_factor = 1;  // complex dimension of the second factor (1 or 2)
  double factor_scale = 2.0;
  double mu0 = 1.0;
  double half_width = 0.8;
};

struct CalabiParams {
  int base_n = 1;  // complex dimension of the base (1 or 2)
  double base_scale = 2.0;
  double a = 1.0;
  double tau_min = 1.0;
  double tau_max = 2.0;
  double c = 0.0;
  int profile_kind = 0;  // 0 quadratic, 1 sine
  double box_shrink = 0.15;  // tau box margin inside (tau_min, tau_max)
  double half_width = 0.7;   // t and base box half width
};

Model make_fubini_study_radial(const FsParams& params);
Model make_product(const ProductParams& params);
Model make_calabi_local(const CalabiParams& params);

// The gate every constructor runs before emitting a chart; throws NotKahler
// when any of the four pointwise residuals exceeds tol on the sample set.
void require_kahler(const ChartDomain& chart, const char* what, int samples = 24,
                    double tol = 1e-8);

// ---- registry ----------------------------------------------------------------

struct ParamSpec {
  std::string name;
  double value = 0.0;  // default
  std::string doc;
};

struct ModelInfo {
  std::string id;
  std::string family;
  std::string doc;
  std::vector<ParamSpec> params;
};

// Families plus the concrete default instances.
std::vector<ModelInfo> model_catalog();

// The default instances exercised by the acceptance suite.
std::vector<std::string> default_instances();

// Every id build_model accepts (families, aliases and concrete instances).
std::vector<std::string> known_model_ids();

Model build_model(const std::string& id, const std::map<std::string, double>& overrides = {});

}  // namespace kver
