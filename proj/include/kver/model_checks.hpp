#pragma once

// Verifications tied to the model catalog: the special-potential conditions,
// the defining relations of the warped charts, the theta identification and
// the boundedness scan around the degenerate point of the radial models.

#include "kver/models.hpp"

namespace kver {

// Eigenvalue of the Hessian endomorphism of tau on the horizontal space
// (mean of its diagonal in an orthonormal horizontal frame).
double horizontal_hessian_eigenvalue(const ChartDomain& chart, const ScalarField& tau,
                                     const MatrixField& ph, const VecD& p);

// max-abs of H^tau restricted to the horizontal space minus Theta * g there;
// zero exactly when every horizontal vector is an eigenvector.
double hessian_horizontal_spread(const ChartDomain& chart, const ScalarField& tau,
                                 const MatrixField& ph, const VecD& p);

// | Ric(grad tau, .)# - rho grad tau |_g / |grad tau|_g with rho fitted.
double ricci_eigenfield_residual(const ChartDomain& chart, const ScalarField& tau,
                                 const VecD& p);

// | Q / Theta - 2 (tau - c) |
double relation_q_theta_residual(const Model& model, const VecD& p);

// max-abs of dQ - 2 Lambda dtau with Lambda = H^tau(grad tau, grad tau) / Q.
double relation_dq_lambda_residual(const Model& model, const VecD& p);

// componentwise gap between 2 (Theta / Q) dtau and d log|tau - c|.
double theta_consistency_residual(const Model& model, const VecD& p);

struct BoundednessScan {
  double limit = 0.0;            // 1 / (2a)
  double worst_ratio_error = 0.0;  // max |(tau-c)/Q - limit| over the scan
  double max_ratio_rel_error = 0.0;  // the same, relative to the limit
  double s_norm_at_smallest_radius = 0.0;
  double mu_at_smallest_radius = 0.0;
  double max_deficit_near_origin = 0.0;   // Hamiltonian deficit on the scan
  double interior_median_deficit = 0.0;   // reference level away from it
  int points_scanned = 0;
};

// Radial scan of the excluded ball of a radial model: rays from the origin,
// radii geometrically spaced in [r_min, r_max].
BoundednessScan boundedness_scan(const Model& model, int rays, int radii, double r_min,
                                 double r_max, std::uint64_t seed);

}  // namespace kver
