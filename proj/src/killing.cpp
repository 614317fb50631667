#include "kver/killing.hpp"

#include <algorithm>
#include <cmath>

#include "kver/errors.hpp"

namespace kver {

double g_symmetry_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p) {
  const MatD g = metric_at(chart, p);
  const MatD b = matmul(g, s.eval(p));
  return max_abs(b - transpose(b));
}

double j_invariance_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p) {
  const MatD j = chart.complex_structure().eval(p);
  const MatD sm = s.eval(p);
  return max_abs(matmul(j, sm) - matmul(sm, j));
}

double cyclic_killing_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p,
                               const VecD& x, const VecD& y, const VecD& z) {
  const PointFrame fr = point_frame(chart, p);
  const Mat<D1> sj = s.eval(seed_point<D1>(p));
  const MatD dx = cov_deriv_endo(fr, sj, x);
  const MatD dy = cov_deriv_endo(fr, sj, y);
  const MatD dz = cov_deriv_endo(fr, sj, z);
  return g_inner(fr.g, matvec(dx, y), z) + g_inner(fr.g, matvec(dz, x), y) +
         g_inner(fr.g, matvec(dy, z), x);
}

double diag_killing_residual(const ChartDomain& chart, const MatrixField& s, const VecD& p,
                             const VecD& x) {
  const PointFrame fr = point_frame(chart, p);
  const Mat<D1> sj = s.eval(seed_point<D1>(p));
  const MatD dx = cov_deriv_endo(fr, sj, x);
  return g_inner(fr.g, matvec(dx, x), x);
}

EigenSplit eigensplit(const ChartDomain& chart, const MatrixField& s, const VecD& p,
                      double expected_lambda) {
  const int n = p.n;
  const MatD g = metric_at(chart, p);
  const MatD sm = s.eval(p);
  const MatD root = sym_sqrt(g);
  const MatD root_inv = sym_inv_sqrt(g);
  const MatD b = matmul(root, matmul(sm, root_inv));
  const MatD bsym = (b + transpose(b)) * 0.5;
  const SymEigen eig = sym_eigen(bsym);

  double op_norm = 0.0;
  for (int i = 0; i < n; ++i) op_norm = std::max(op_norm, std::abs(eig.values[i]));
  const double gap_tol = 1e-6 * (1.0 + op_norm);

  // Largest gap in the sorted spectrum determines the two clusters.
  int split = 1;
  double best_gap = -1.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double gap = eig.values[i + 1] - eig.values[i];
    if (gap > best_gap) {
      best_gap = gap;
      split = i + 1;
    }
  }
  if (best_gap < gap_tol)
    throw DegenerateSpectrum("eigensplit: spectrum has no two-cluster gap");
  if (split != 2 && split != n - 2)
    throw DegenerateSpectrum("eigensplit: cluster multiplicities are not (2, dim-2)");

  // Cluster means; the one nearer expected_lambda is the vertical plane.
  double mean_lo = 0.0, mean_hi = 0.0;
  for (int i = 0; i < split; ++i) mean_lo += eig.values[i];
  mean_lo /= split;
  for (int i = split; i < n; ++i) mean_hi += eig.values[i];
  mean_hi /= (n - split);

  const bool lo_is_vertical =
      split == 2 && (n - split == 2
                         ? std::abs(mean_lo - expected_lambda) <= std::abs(mean_hi - expected_lambda)
                         : true);
  // In dimensions above 4 the multiplicity-2 cluster is unambiguous.
  int v_begin, v_end;
  if (split == 2 && (n - split != 2 || lo_is_vertical)) {
    v_begin = 0;
    v_end = 2;
  } else {
    v_begin = n - 2;
    v_end = n;
  }

  EigenSplit out;
  out.eigenvalues = eig.values;
  out.gap = best_gap;
  double lam = 0.0, mu = 0.0;
  for (int k = 0; k < n; ++k) {
    VecD v = zero_vec<double>(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += root_inv(i, j) * eig.vectors(j, k);
      v[i] = acc;
    }
    if (k >= v_begin && k < v_end) {
      out.vertical.push_back(v);
      lam += eig.values[k];
    } else {
      out.horizontal.push_back(v);
      mu += eig.values[k];
    }
  }
  out.lambda = lam / 2.0;
  out.mu = mu / (n - 2);
  return out;
}

RadialIdentityResult prop11_radial_identity(const ChartDomain& chart, const MatrixField& s,
                                            const ScalarField* eigenvalue_field, const VecD& p,
                                            const VecD& x) {
  const PointFrame fr = point_frame(chart, p);
  const Mat<D1> sj = s.eval(seed_point<D1>(p));
  const MatD ds = cov_deriv_endo(fr, sj, x);
  const double x_norm2 = g_inner(fr.g, x, x);

  RadialIdentityResult out;
  out.residual = matvec(ds, x);
  out.d_lambda_x = 0.0;
  if (eigenvalue_field != nullptr) {
    const VecD dlam = coordinate_gradient(*eigenvalue_field, p);
    const VecD grad_lam = matvec(fr.ginv, dlam);
    for (int i = 0; i < p.n; ++i) out.residual[i] += 0.5 * grad_lam[i] * x_norm2;
    out.d_lambda_x = dot(dlam, x);
  }
  return out;
}

MixedIdentityResult prop11_mixed_identity(const ChartDomain& chart, const MatrixField& proj_i,
                                          const ScalarField* lambda_i_field, double lambda_i,
                                          double lambda_j, const VecD& p, const VecD& x,
                                          const VecD& y) {
  if (std::abs(lambda_j - lambda_i) < 1e-10)
    throw DegenerateSpectrum("mixed identity needs distinct eigenvalues");

  const PointFrame fr = point_frame(chart, p);
  const Mat<D1> pj = proj_i.eval(seed_point<D1>(p));

  // Extension of x through the eigenprojector field.
  Vec<D1> xt;
  xt.n = p.n;
  for (int i = 0; i < p.n; ++i) {
    D1 acc{};
    for (int j = 0; j < p.n; ++j) acc = acc + pj(i, j) * x[j];
    xt[i] = acc;
  }
  const VecD nabla_xx = cov_deriv_vector(fr, xt, x);

  MixedIdentityResult out;
  out.lhs = g_inner(fr.g, nabla_xx, y);
  double y_lambda_i = 0.0;
  if (lambda_i_field != nullptr) {
    const VecD dlam = coordinate_gradient(*lambda_i_field, p);
    y_lambda_i = dot(dlam, y);
  }
  const double x_norm2 = g_inner(fr.g, x, x);
  out.rhs = 0.5 * y_lambda_i / (lambda_j - lambda_i) * x_norm2;
  // For the varying eigenvalue against the zero eigenplane the same formula
  // reads -g(X,X) (Y mu) / (2 mu).
  out.rhs_specialized =
      lambda_j == 0.0 && lambda_i != 0.0 ? -x_norm2 * y_lambda_i / (2.0 * lambda_i) : out.rhs;
  return out;
}

GeodesicInvariantResult geodesic_invariant(const ChartDomain& chart, const MatrixField& s,
                                           const VecD& p, const VecD& v, double t_end,
                                           int steps) {
  const GeodesicResult traj = integrate_geodesic(chart, p, v, t_end, steps);

  GeodesicInvariantResult out;
  out.truncated = traj.truncated;
  out.t_reached = traj.states.back().t;

  double t0 = 0.0, e0 = 0.0;
  bool first = true;
  for (const GeodesicState& st : traj.states) {
    const MatD g = chart.metric().eval(st.x);
    const MatD sm = s.eval(st.x);
    const double tv = g_inner(g, matvec(sm, st.v), st.v);
    const double ev = g_inner(g, st.v, st.v);
    if (first) {
      t0 = tv;
      e0 = ev;
      first = false;
    } else {
      out.drift = std::max(out.drift, std::abs(tv - t0));
      out.energy_drift = std::max(out.energy_drift, std::abs(ev - e0));
    }
  }
  return out;
}

MatrixField shift_spectrum(MatrixField s, double lambda) {
  return make_matrix_field([s = std::move(s), lambda]<class T>(const Vec<T>& x) {
    return s.eval(x) - identity<T>(x.n) * lambda;
  });
}

}  // namespace kver
