#pragma once

// Killing-tensor residuals, eigenstructure and the two eigenvalue identities
// for g-symmetric J-invariant tensors with one constant eigenvalue on a
// 2-plane and one (possibly varying) eigenvalue on its complement.

#include <optional>
#include <vector>

#include "kver/chart.hpp"
#include "kver/geometry.hpp"

namespace kver {

// max-abs of gS - (gS)^T; zero for g-symmetric candidates.
double g_symmetry_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p);

// max-abs of JS - SJ.
double j_invariance_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p);

// g(nabla S(X,Y), Z) + g(nabla S(Z,X), Y) + g(nabla S(Y,Z), X)
double cyclic_killing_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p,
                               const VecD& x, const VecD& y, const VecD& z);

// g(nabla S(X,X), X); one third of the cyclic sum at (X,X,X).
double diag_killing_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p,
                             const VecD& x);

struct EigenSplit {
  VecD eigenvalues;                 // ascending
  std::vector<VecD> vertical;      // g-orthonormal basis, 2 vectors
  std::vector<VecD> horizontal;    // g-orthonormal basis, dim-2 vectors
  double lambda = 0.0;             // vertical cluster mean
  double mu = 0.0;                 // horizontal cluster mean
  double gap = 0.0;
};

// Clusters the spectrum of the g-symmetrized matrix into multiplicities
// (2, dim-2); the cluster nearer expected_lambda becomes vertical. Throws
// DegenerateSpectrum when the gap is below 1e-6 (1 + |S|_op).
EigenSplit eigensplit(const ChartDomain& chart, const MatrixField& s, const VecD& p,
                      double expected_lambda = 0.0);

struct RadialIdentityResult {
  VecD residual;     // nabla S(X,X) + (1/2) grad(lambda_i) |X|^2
  double d_lambda_x; // d lambda_i (X); the eigenplane sits in ker d lambda_i
};

// Identity for X in one eigendistribution. eigenvalue_field is null for the
// constant eigenvalue.
RadialIdentityResult prop11_radial_identity(const ChartDomain& chart, const MatrixField& s,
                                            const ScalarField* eigenvalue_field, const VecD& p,
                                            const VecD& x);

struct MixedIdentityResult {
  double lhs;             // g(nabla_X Xtilde, Y)
  double rhs;             // (1/2) (Y lambda_i) / (lambda_j - lambda_i) |X|^2
  double rhs_specialized; // -g(X,X) (Y mu) / (2 mu) when applicable, else rhs
};

// Identity for X in the lambda_i eigendistribution (extended through its
// projector field) and Y in the lambda_j one, evaluated at p.
MixedIdentityResult prop11_mixed_identity(const ChartDomain& chart,
                                          const MatrixField& proj_i,
                                          const ScalarField* lambda_i_field, double lambda_i,
                                          double lambda_j, const VecD& p, const VecD& x,
                                          const VecD& y);

struct GeodesicInvariantResult {
  double drift = 0.0;         // max_t |T(v,v)(t) - T(v,v)(0)|
  double energy_drift = 0.0;  // same for g(v,v)
  bool truncated = false;
  double t_reached = 0.0;
};

GeodesicInvariantResult geodesic_invariant(const ChartDomain& chart, const MatrixField& s,
                                           const VecD& p, const VecD& v, double t_end,
                                           int steps);

// S - lambda * Identity as a field.
MatrixField shift_spectrum(MatrixField s, double lambda);

}  // namespace kver
