#pragma once

// Complex-structure checks: the four Kahler gate residuals, d^c, and the
// Killing / holomorphic residuals of vector fields.
//
// Sign conventions (also stamped into every report):
//   omega(X,Y) = g(JX,Y)
//   (d^c f)(X) = -df(JX)

#include "kver/chart.hpp"
#include "kver/geometry.hpp"

namespace kver {

struct KahlerPointResiduals {
  double j_squared = 0.0;     // max-abs of J^2 + I
  double g_invariance = 0.0;  // max-abs of J^T g J - g
  double nabla_j = 0.0;       // max-abs of the covariant derivative of J
  double d_omega = 0.0;       // max-abs coefficient of d omega
  double omega_det = 0.0;     // |det omega|, nondegeneracy witness

  double worst() const;
};

KahlerPointResiduals kahler_residuals(const ChartDomain& chart, const VecD& p);

// (d^c f)_a at p.
VecD dc_scalar(const ChartDomain& chart, const ScalarField& f, const VecD& p);

// g(nabla_X xi, Y) + g(nabla_Y xi, X); vanishes iff xi is Killing.
double killing_field_residual(const ChartDomain& chart, const VectorField& xi, const VecD& p,
                              const VecD& x, const VecD& y);
double killing_field_residual(const PointFrame& fr, const Vec<D1>& xi_jet, const VecD& x,
                              const VecD& y);

// max-abs of the Lie derivative of J along xi, computed through brackets:
// (L_xi J)(X) = [xi, JX] - J [xi, X].
double holomorphic_field_residual(const ChartDomain& chart, const VectorField& xi,
                                  const VecD& p);

// |H(JX,JY) - H(X,Y)| for the Hessian of f, maximized over the given pairs.
double hessian_j_invariance_residual(const ChartDomain& chart, const ScalarField& f,
                                     const VecD& p, const VecD& x, const VecD& y);

}  // namespace kver
