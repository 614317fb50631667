#include "kver/kahler.hpp"

#include <algorithm>
#include <cmath>

#include "kver/derived.hpp"

namespace kver {

double KahlerPointResiduals::worst() const {
  return std::max(std::max(j_squared, g_invariance), std::max(nabla_j, d_omega));
}

KahlerPointResiduals kahler_residuals(const ChartDomain& chart, const VecD& p) {
  const int n = p.n;
  KahlerPointResiduals out;

  const Vec<D1> x = seed_point<D1>(p);
  const Mat<D1> gj = chart.metric().eval(x);
  const Mat<D1> jj = chart.complex_structure().eval(x);

  MatD g = zero_mat<double>(n), j = zero_mat<double>(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      g(a, b) = value_of(gj(a, b));
      j(a, b) = value_of(jj(a, b));
    }

  out.j_squared = max_abs(matmul(j, j) + identity<double>(n));
  out.g_invariance = max_abs(matmul(transpose(j), matmul(g, j)) - g);

  const GammaD gamma = christoffel_depth<double>(chart, p);
  double nj = 0.0;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v = jj(a, b).d[k];
        for (int m = 0; m < n; ++m)
          v += gamma.at(a, k, m) * value_of(jj(m, b)) - gamma.at(m, k, b) * value_of(jj(a, m));
        nj = std::max(nj, std::abs(v));
      }
  out.nabla_j = nj;

  // omega_{ab} = J^c_a g_{cb}; d omega by cyclic coordinate partials.
  Mat<D1> omega = matmul(transpose(jj), gj);
  double dw = 0.0;
  for (int k = 0; k < n; ++k)
    for (int a = k + 1; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const double v = omega(a, b).d[k] + omega(b, k).d[a] + omega(k, a).d[b];
        dw = std::max(dw, std::abs(v));
      }
  out.d_omega = dw;

  MatD omega0 = zero_mat<double>(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) omega0(a, b) = value_of(omega(a, b));
  out.omega_det = std::abs(determinant(omega0));
  return out;
}

VecD dc_scalar(const ChartDomain& chart, const ScalarField& f, const VecD& p) {
  const VecD df = coordinate_gradient(f, p);
  const MatD j = chart.complex_structure().eval(p);
  VecD out = zero_vec<double>(p.n);
  for (int a = 0; a < p.n; ++a) {
    double s = 0.0;
    for (int b = 0; b < p.n; ++b) s += df[b] * j(b, a);
    out[a] = -s;
  }
  return out;
}

double killing_field_residual(const PointFrame& fr, const Vec<D1>& xi_jet, const VecD& x,
                              const VecD& y) {
  const VecD dx = cov_deriv_vector(fr, xi_jet, x);
  const VecD dy = cov_deriv_vector(fr, xi_jet, y);
  return g_inner(fr.g, dx, y) + g_inner(fr.g, dy, x);
}

double killing_field_residual(const ChartDomain& chart, const VectorField& xi, const VecD& p,
                              const VecD& x, const VecD& y) {
  const PointFrame fr = point_frame(chart, p);
  return killing_field_residual(fr, xi.eval(seed_point<D1>(p)), x, y);
}

double holomorphic_field_residual(const ChartDomain& chart, const VectorField& xi,
                                  const VecD& p) {
  const int n = p.n;
  const Vec<D1> q = seed_point<D1>(p);
  const Vec<D1> xj = xi.eval(q);
  const Mat<D1> jj = chart.complex_structure().eval(q);

  // (L_xi J)^i_a = xi^m d_m J^i_a - J^k_a d_k xi^i + J^i_k d_a xi^k
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) {
      double v = 0.0;
      for (int m = 0; m < n; ++m) {
        v += value_of(xj[m]) * jj(i, a).d[m];
        v -= value_of(jj(m, a)) * xj[i].d[m];
        v += value_of(jj(i, m)) * xj[m].d[a];
      }
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

double hessian_j_invariance_residual(const ChartDomain& chart, const ScalarField& f,
                                     const VecD& p, const VecD& x, const VecD& y) {
  const MatD h = hessian_scalar(chart, f, p);
  const MatD j = chart.complex_structure().eval(p);
  const VecD jx = matvec(j, x);
  const VecD jy = matvec(j, y);
  return std::abs(pair(h, jx, jy) - pair(h, x, y));
}

}  // namespace kver
