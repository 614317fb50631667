#pragma once

// Chart-level Riemannian calculus: Christoffel symbols, covariant
// derivatives of scalar / vector / endomorphism / 2-form fields, Ricci
// curvature, geodesics and Lie brackets. Derivatives of field coefficients
// come from the dual-number layers; finite differences appear only in the
// independent oracle at the bottom of this header.

#include <vector>

#include "kver/chart.hpp"
#include "kver/linalg.hpp"

namespace kver {

inline constexpr double kPdThreshold = 1e-10;
inline constexpr double kDefaultFdStep = 1e-4;

template <class T>
struct Christoffel {
  int n = 0;
  std::array<T, kMaxDim * kMaxDim * kMaxDim> e{};

  T& at(int k, int i, int j) {
    return e[static_cast<std::size_t>((k * kMaxDim + i) * kMaxDim + j)];
  }
  const T& at(int k, int i, int j) const {
    return e[static_cast<std::size_t>((k * kMaxDim + i) * kMaxDim + j)];
  }
};

using GammaD = Christoffel<double>;
using GammaJet = Christoffel<D1>;

// Levi-Civita symbols carried at AD depth T (T = double for values, D1 when
// curvature needs their first derivatives).
template <class T>
Christoffel<T> christoffel_depth(const ChartDomain& chart, const VecD& p) {
  using U = Dual<T>;
  const Vec<U> x = seed_point<U>(p);
  const Mat<U> gu = chart.metric().eval(x);
  const int n = gu.n;

  Mat<T> g = zero_mat<T>(n);
  std::array<Mat<T>, kMaxDim> dg;
  for (int k = 0; k < n; ++k) dg[k] = zero_mat<T>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = gu(i, j).v;
      for (int k = 0; k < n; ++k) dg[k](i, j) = gu(i, j).d[static_cast<std::size_t>(k)];
    }

  const Mat<T> ginv = inverse(g);
  Christoffel<T> out;
  out.n = n;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        T s = dual_const<T>(0.0);
        for (int l = 0; l < n; ++l)
          s = s + ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        s = s * 0.5;
        out.at(k, i, j) = s;
        out.at(k, j, i) = s;
      }
  return out;
}

// ---- pointwise data ----------------------------------------------------------

// Everything several residuals share at one sample point.
struct PointFrame {
  VecD p;
  MatD g;
  MatD ginv;
  MatD J;
  GammaD gamma;
};

MatD metric_at(const ChartDomain& chart, const VecD& p, bool check_pd = true);
PointFrame point_frame(const ChartDomain& chart, const VecD& p, bool check_pd = true);

double g_inner(const MatD& g, const VecD& x, const VecD& y);
VecD g_normalize(const MatD& g, VecD x);
VecD lower_vec(const MatD& g, const VecD& x);
// Bilinear form of an endomorphism: (g S)_{ij} = g_{ik} S^k_j.
MatD lower_endo(const MatD& g, const MatD& s);

// ---- core operations ---------------------------------------------------------

GammaD christoffel(const ChartDomain& chart, const VecD& p);

VecD grad_scalar(const ChartDomain& chart, const ScalarField& f, const VecD& p);

// (\nabla df)_{ij} = d_i d_j f - Gamma^k_{ij} d_k f
MatD hessian_scalar(const ChartDomain& chart, const ScalarField& f, const VecD& p);

VecD cov_deriv_vector(const ChartDomain& chart, const VectorField& v, const VecD& x,
                      const VecD& p);
VecD cov_deriv_vector(const PointFrame& fr, const Vec<D1>& vjet, const VecD& x);

// (\nabla_X S)^i_j for an endomorphism-valued field.
MatD cov_deriv_endo(const ChartDomain& chart, const MatrixField& s, const VecD& x,
                    const VecD& p);
MatD cov_deriv_endo(const PointFrame& fr, const Mat<D1>& sjet, const VecD& x);

// (\nabla_X phi)_{ij} for a 2-form field (lower indices).
MatD cov_deriv_two_form(const ChartDomain& chart, const MatrixField& phi, const VecD& x,
                        const VecD& p);
MatD cov_deriv_two_form(const PointFrame& fr, const Mat<D1>& pjet, const VecD& x);

MatD ricci(const ChartDomain& chart, const VecD& p);

VecD lie_bracket(const ChartDomain& chart, const VectorField& x, const VectorField& y,
                 const VecD& p);

// ---- geodesics ---------------------------------------------------------------

struct GeodesicState {
  double t = 0.0;
  VecD x;
  VecD v;
};

struct GeodesicResult {
  std::vector<GeodesicState> states;  // includes the initial state
  bool truncated = false;             // left the chart box before t_end
};

// Classical fixed-step RK4 for \ddot x^k + Gamma^k_{ij} \dot x^i \dot x^j = 0.
GeodesicResult integrate_geodesic(const ChartDomain& chart, const VecD& p0, const VecD& v0,
                                  double t_end, int steps);

// ---- finite-difference oracle ------------------------------------------------

enum class TensorKind { endo, two_form };

// Central-difference approximation of a covariant derivative: coefficient
// partials by symmetric differences of plain field values, connection terms
// added explicitly. Independent of the dual-number path above except for the
// shared Christoffel correction. With check_convergence the step is validated
// by a three-level Richardson ratio and StepTooLarge is thrown when the
// differences do not shrink quadratically.
MatD fd_cov_deriv(const ChartDomain& chart, const MatrixField& field, TensorKind kind,
                  const VecD& x, const VecD& p, double h, bool check_convergence = false);

// max-abs gap between the AD covariant derivative and the oracle at step h.
double fd_ad_gap(const ChartDomain& chart, const MatrixField& field, TensorKind kind,
                 const VecD& x, const VecD& p, double h);

}  // namespace kver
