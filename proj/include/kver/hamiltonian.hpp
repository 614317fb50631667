#pragma once

// The defining identity of the momentum-type 2-forms and the two-way
// correspondence with two-eigenvalue Killing tensors.
//
//   sigma           = (1/2) sum_k phi(e_k, J e_k)   (so that sigma(omega) = n)
//   deficit(X)      = nabla_X phi - (1/2)(d sigma ^ (JX)^flat - d^c sigma ^ X^flat)
//   cyclic form     = sum_cyc nabla_X phi(Y, JZ) - sum_cyc d sigma(X) g(Y,Z)
//   s_from_phi      : g(SX, Y) = phi(X, JY) - sigma g(X, Y)
//   phi_from_s      : phi(X, Y) = g(S(JX), Y) - mu omega(X, Y)

#include "kver/chart.hpp"
#include "kver/geometry.hpp"

namespace kver {

double trace_sigma(const ChartDomain& chart, const MatrixField& phi, const VecD& p);

// sigma as a derived scalar field (consumes no extra dual depth beyond phi).
ScalarField trace_sigma_field(MatrixField g, MatrixField j, MatrixField phi);

// J-invariance of the 2-form: max-abs of phi(J.,J.) - phi.
double two_form_j_invariance_residual(const ChartDomain& chart, const MatrixField& phi,
                                      const VecD& p);

// Full deficit matrix for one direction X; suites take max-abs entries.
MatD hamiltonian_deficit(const ChartDomain& chart, const MatrixField& phi,
                         const ScalarField& sigma, const VecD& p, const VecD& x);

double cyclic_consequence_residual(const ChartDomain& chart, const MatrixField& phi,
                                   const ScalarField& sigma, const VecD& p, const VecD& x,
                                   const VecD& y, const VecD& z);

MatrixField s_from_phi(MatrixField g, MatrixField j, MatrixField phi);

MatrixField phi_from_s(MatrixField g, MatrixField j, MatrixField s, ScalarField mu);

}  // namespace kver
