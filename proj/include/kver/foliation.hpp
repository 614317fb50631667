#pragma once

// Residuals for the properties of the vertical 2-plane distribution and its
// orthogonal complement: totally geodesic, umbilical, integrable, conformal,
// homothetic, holomorphic, and the second-fundamental-form identity of the
// horizontal plane with theta = d log|mu|.
//
// Tangent vectors are always extended through the supplied projector field
// (applied to the constant-coefficient extension), so covariant derivatives
// of sections are well defined and deterministic.

#include "kver/chart.hpp"
#include "kver/geometry.hpp"

namespace kver {

// Jet of the projected extension q -> P(q) * v_const.
Vec<D1> projected_extension_jet(const MatrixField& proj, const VecD& v, const VecD& p);

// |(I - P) nabla_X Xtilde|_g for X = P x_raw (normalized); X in the
// distribution, derivative of its projected extension.
double totally_geodesic_residual(const ChartDomain& chart, const MatrixField& proj,
                                 const VecD& p, const VecD& x_raw);

struct UmbilicalResult {
  VecD mean_curvature;  // xi recovered by averaging over an orthonormal frame
  double residual;      // |2 (nabla_X Ytilde)_perp - g(X,Y) xi - omega(X,Y) J xi|_g
};

// The distribution must be 2-dimensional (DimensionMismatch otherwise).
UmbilicalResult umbilical_identity_residual(const ChartDomain& chart, const MatrixField& proj,
                                            const VecD& p, const VecD& x_raw,
                                            const VecD& y_raw);

// |(I - P)[E1, E2]|_g for explicit frame fields spanning the plane near p.
double integrability_residual(const ChartDomain& chart, const VectorField& e1,
                              const VectorField& e2, const MatrixField& proj, const VecD& p);

// (L_V g)(X, Y) - theta(V) g(X, Y) with theta = d log|mu|, V vertical
// (projected), X and Y horizontal (projected). MuVanishes when |mu| is tiny.
double conformal_residual(const ChartDomain& chart, const MatrixField& pv,
                          const MatrixField& ph, const ScalarField& mu, const VecD& p,
                          const VecD& v_raw, const VecD& x_raw, const VecD& y_raw);

// max-abs of the exterior derivative of a covector field (components carried
// in a VectorField).
double d_covector_residual(const ChartDomain& chart, const VectorField& w, const VecD& p);

// theta = d mu / mu as a covector field; MuVanishes guard applies at
// evaluation points where |mu| is tiny.
VectorField theta_covector_field(ScalarField mu);

// max-abs of d theta for theta = d mu / mu; zero since theta is exact.
double homothetic_residual(const ChartDomain& chart, const ScalarField& mu, const VecD& p);

// |(I - P)(nabla_{JX} Vtilde - J nabla_X Vtilde)|_g.
double holomorphic_foliation_residual(const ChartDomain& chart, const MatrixField& pv,
                                      const VecD& p, const VecD& x, const VecD& v_raw);

struct StructureIdentityResult {
  double residual;   // |2 (nabla_X Ytilde)_vert + g(X,Y) theta# + omega(X,Y) J theta#|_g
  double alpha;      // coefficient of J theta# recovered from the derivative
  double omega_xy;   // the identity forces alpha = -omega(X,Y)
};

StructureIdentityResult structure_identity_residual(const ChartDomain& chart,
                                                    const MatrixField& pv,
                                                    const MatrixField& ph,
                                                    const ScalarField& mu, const VecD& p,
                                                    const VecD& x_raw, const VecD& y_raw);

}  // namespace kver
