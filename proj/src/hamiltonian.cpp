#include "kver/hamiltonian.hpp"

#include <cmath>
#include <utility>

#include "kver/derived.hpp"

namespace kver {

namespace {

// sigma = (1/2) tr(phi J g^{-1}); contraction of phi with omega normalized
// so that omega itself traces to half the chart dimension.
template <class T>
T sigma_at(const Mat<T>& g, const Mat<T>& j, const Mat<T>& phi) {
  const Mat<T> m = matmul(phi, matmul(j, inverse(g)));
  return trace(m) * 0.5;
}

}  // namespace

double trace_sigma(const ChartDomain& chart, const MatrixField& phi, const VecD& p) {
  return sigma_at<double>(chart.metric().eval(p), chart.complex_structure().eval(p),
                          phi.eval(p));
}

ScalarField trace_sigma_field(MatrixField g, MatrixField j, MatrixField phi) {
  return make_scalar_field([g = std::move(g), j = std::move(j),
                            phi = std::move(phi)]<class T>(const Vec<T>& x) -> T {
    if constexpr (dual_depth_v<T> >= 4) {
      throw UnsupportedOrder("derived trace supports three derivative orders");
    } else {
      return sigma_at<T>(g.eval(x), j.eval(x), phi.eval(x));
    }
  });
}

double two_form_j_invariance_residual(const ChartDomain& chart, const MatrixField& phi,
                                      const VecD& p) {
  const MatD j = chart.complex_structure().eval(p);
  const MatD f = phi.eval(p);
  return max_abs(matmul(transpose(j), matmul(f, j)) - f);
}

MatD hamiltonian_deficit(const ChartDomain& chart, const MatrixField& phi,
                         const ScalarField& sigma, const VecD& p, const VecD& x) {
  const PointFrame fr = point_frame(chart, p);
  const MatD nabla = cov_deriv_two_form(fr, phi.eval(seed_point<D1>(p)), x);

  const VecD dsigma = coordinate_gradient(sigma, p);
  VecD dcsigma = zero_vec<double>(p.n);  // (d^c s)_a = -s_{,b} J^b_a
  for (int a = 0; a < p.n; ++a) {
    double acc = 0.0;
    for (int b = 0; b < p.n; ++b) acc += dsigma[b] * fr.J(b, a);
    dcsigma[a] = -acc;
  }
  const VecD jx_flat = lower_vec(fr.g, matvec(fr.J, x));
  const VecD x_flat = lower_vec(fr.g, x);

  MatD out = nabla;
  for (int a = 0; a < p.n; ++a)
    for (int b = 0; b < p.n; ++b) {
      const double rhs = 0.5 * (dsigma[a] * jx_flat[b] - dsigma[b] * jx_flat[a] -
                                (dcsigma[a] * x_flat[b] - dcsigma[b] * x_flat[a]));
      out(a, b) -= rhs;
    }
  return out;
}

double cyclic_consequence_residual(const ChartDomain& chart, const MatrixField& phi,
                                   const ScalarField& sigma, const VecD& p, const VecD& x,
                                   const VecD& y, const VecD& z) {
  const PointFrame fr = point_frame(chart, p);
  const Mat<D1> pj = phi.eval(seed_point<D1>(p));
  const MatD dx = cov_deriv_two_form(fr, pj, x);
  const MatD dy = cov_deriv_two_form(fr, pj, y);
  const MatD dz = cov_deriv_two_form(fr, pj, z);
  const VecD jx = matvec(fr.J, x), jy = matvec(fr.J, y), jz = matvec(fr.J, z);

  const double lhs = pair(dx, y, jz) + pair(dy, z, jx) + pair(dz, x, jy);

  const VecD dsigma = coordinate_gradient(sigma, p);
  const double rhs = dot(dsigma, x) * g_inner(fr.g, y, z) +
                     dot(dsigma, y) * g_inner(fr.g, z, x) +
                     dot(dsigma, z) * g_inner(fr.g, x, y);
  return lhs - rhs;
}

MatrixField s_from_phi(MatrixField g, MatrixField j, MatrixField phi) {
  return make_matrix_field([g = std::move(g), j = std::move(j),
                            phi = std::move(phi)]<class T>(const Vec<T>& x) -> Mat<T> {
    const Mat<T> gx = g.eval(x);
    const Mat<T> jx = j.eval(x);
    const Mat<T> fx = phi.eval(x);
    const T sigma = sigma_at<T>(gx, jx, fx);
    // bilinear form phi(., J.) - sigma g, raised on the first slot
    const Mat<T> bil = matmul(fx, jx) - gx * sigma;
    return matmul(inverse(gx), bil);
  });
}

MatrixField phi_from_s(MatrixField g, MatrixField j, MatrixField s, ScalarField mu) {
  return make_matrix_field([g = std::move(g), j = std::move(j), s = std::move(s),
                            mu = std::move(mu)]<class T>(const Vec<T>& x) -> Mat<T> {
    const Mat<T> gx = g.eval(x);
    const Mat<T> jx = j.eval(x);
    const Mat<T> omega = matmul(transpose(jx), gx);
    const Mat<T> sj = matmul(s.eval(x), jx);
    return matmul(transpose(sj), gx) - omega * mu.eval(x);
  });
}

}  // namespace kver
