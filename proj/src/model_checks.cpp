#include "kver/model_checks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kver/errors.hpp"
#include "kver/geometry.hpp"
#include "kver/hamiltonian.hpp"
#include "kver/sampling.hpp"

namespace kver {

namespace {

// g-orthonormal basis of the horizontal space from projected coordinate axes.
std::vector<VecD> horizontal_frame(const PointFrame& fr, const MatD& ph) {
  const int n = fr.p.n;
  std::vector<VecD> basis;
  for (int a = 0; a < n && static_cast<int>(basis.size()) < n - 2; ++a) {
    VecD e = zero_vec<double>(n);
    e[a] = 1.0;
    VecD v = matvec(ph, e);
    for (const VecD& b : basis) v = v - b * g_inner(fr.g, v, b);
    const double norm2v = g_inner(fr.g, v, v);
    if (norm2v > 1e-12) basis.push_back(v * (1.0 / std::sqrt(norm2v)));
  }
  if (static_cast<int>(basis.size()) != n - 2)
    throw DegenerateSpectrum("horizontal frame: projector rank is not dim-2");
  return basis;
}

}  // namespace

double horizontal_hessian_eigenvalue(const ChartDomain& chart, const ScalarField& tau,
                                     const MatrixField& ph, const VecD& p) {
  const PointFrame fr = point_frame(chart, p);
  const MatD h = hessian_scalar(chart, tau, p);
  const std::vector<VecD> basis = horizontal_frame(fr, ph.eval(p));
  double acc = 0.0;
  for (const VecD& b : basis) acc += pair(h, b, b);
  return acc / static_cast<double>(basis.size());
}

double hessian_horizontal_spread(const ChartDomain& chart, const ScalarField& tau,
                                 const MatrixField& ph, const VecD& p) {
  const PointFrame fr = point_frame(chart, p);
  const MatD h = hessian_scalar(chart, tau, p);
  const std::vector<VecD> basis = horizontal_frame(fr, ph.eval(p));
  const int m = static_cast<int>(basis.size());
  double theta = 0.0;
  for (const VecD& b : basis) theta += pair(h, b, b);
  theta /= m;
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double expected = i == j ? theta : 0.0;
      worst = std::max(worst, std::abs(pair(h, basis[i], basis[j]) - expected));
    }
  return worst;
}

double ricci_eigenfield_residual(const ChartDomain& chart, const ScalarField& tau,
                                 const VecD& p) {
  const PointFrame fr = point_frame(chart, p);
  const MatD ric = ricci(chart, p);
  const VecD grad = matvec(fr.ginv, coordinate_gradient(tau, p));
  const double q = g_inner(fr.g, grad, grad);
  if (q < 1e-18) throw MuVanishes("ricci eigenfield: grad tau vanishes");

  VecD r = matvec(fr.ginv, matvec(ric, grad));  // Ric(grad tau, .)#
  const double rho = g_inner(fr.g, r, grad) / q;
  for (int i = 0; i < p.n; ++i) r[i] -= rho * grad[i];
  return std::sqrt(std::max(0.0, g_inner(fr.g, r, r) / q));
}

double relation_q_theta_residual(const Model& model, const VecD& p) {
  const ChartDomain& chart = model.chart;
  const double theta = horizontal_hessian_eigenvalue(chart, chart.scalar("tau"),
                                                     chart.endo("PH"), p);
  const double q = chart.scalar("Q").eval(p);
  const double mu = chart.scalar("mu").eval(p);
  return std::abs(q / theta - 2.0 * mu);
}

double relation_dq_lambda_residual(const Model& model, const VecD& p) {
  const ChartDomain& chart = model.chart;
  const PointFrame fr = point_frame(chart, p);
  const MatD h = hessian_scalar(chart, chart.scalar("tau"), p);
  const VecD dtau = coordinate_gradient(chart.scalar("tau"), p);
  const VecD grad = matvec(fr.ginv, dtau);
  const double q = chart.scalar("Q").eval(p);
  const double lambda_v = pair(h, grad, grad) / q;
  const VecD dq = coordinate_gradient(chart.scalar("Q"), p);
  double worst = 0.0;
  for (int i = 0; i < p.n; ++i)
    worst = std::max(worst, std::abs(dq[i] - 2.0 * lambda_v * dtau[i]));
  return worst;
}

double theta_consistency_residual(const Model& model, const VecD& p) {
  const ChartDomain& chart = model.chart;
  const double mu = chart.scalar("mu").eval(p);
  if (std::abs(mu) < 1e-9)
    throw MuVanishes("theta consistency: mu vanishes at the sample");
  const double theta = horizontal_hessian_eigenvalue(chart, chart.scalar("tau"),
                                                     chart.endo("PH"), p);
  const double q = chart.scalar("Q").eval(p);
  const VecD dtau = coordinate_gradient(chart.scalar("tau"), p);
  const VecD dmu = coordinate_gradient(chart.scalar("mu"), p);
  double worst = 0.0;
  for (int i = 0; i < p.n; ++i)
    worst = std::max(worst, std::abs(2.0 * (theta / q) * dtau[i] - dmu[i] / mu));
  return worst;
}

BoundednessScan boundedness_scan(const Model& model, int rays, int radii, double r_min,
                                 double r_max, std::uint64_t seed) {
  if (model.family != ModelFamily::fs_radial)
    throw BadParameters("boundedness scan applies to the radial models only");
  const ChartDomain& chart = model.chart;
  const ScalarField sigma = trace_sigma_field(chart.metric(), chart.complex_structure(),
                                              chart.two_form("phi"));

  BoundednessScan out;
  out.limit = 1.0 / (2.0 * model.a);

  const std::uint64_t dir_seed = rng::derive_stream(seed, 11);
  for (int ray = 0; ray < rays; ++ray) {
    VecD dir = raw_vector(dir_seed, static_cast<std::uint64_t>(ray), 0, model.dim);
    const double len = norm2(dir);
    if (len < 1e-6) continue;
    for (int i = 0; i < model.dim; ++i) dir[i] /= len;

    for (int step = 0; step < radii; ++step) {
      const double r =
          r_min * std::pow(r_max / r_min, static_cast<double>(step) / (radii - 1));
      const VecD p = dir * r;
      const double q = chart.scalar("Q").eval(p);
      const double mu = chart.scalar("mu").eval(p);
      const double err = std::abs(mu / q - out.limit);
      out.worst_ratio_error = std::max(out.worst_ratio_error, err);
      out.max_ratio_rel_error = std::max(out.max_ratio_rel_error, err / out.limit);
      ++out.points_scanned;

      const VecD x = raw_vector(dir_seed, 4096 + static_cast<std::uint64_t>(ray), step, model.dim);
      out.max_deficit_near_origin =
          std::max(out.max_deficit_near_origin,
                   max_abs(hamiltonian_deficit(chart, chart.two_form("phi"), sigma, p, x)));

      if (step == 0) {
        // |S|_op at the innermost radius; the tensor collapses with mu.
        const MatD root = sym_sqrt(chart.metric().eval(p));
        const MatD b = matmul(root, matmul(chart.endo("S").eval(p), sym_inv_sqrt(chart.metric().eval(p))));
        const SymEigen eig = sym_eigen((b + transpose(b)) * 0.5);
        double op = 0.0;
        for (int i = 0; i < model.dim; ++i) op = std::max(op, std::abs(eig.values[i]));
        out.s_norm_at_smallest_radius = std::max(out.s_norm_at_smallest_radius, op);
        out.mu_at_smallest_radius = std::max(out.mu_at_smallest_radius, std::abs(mu));
      }
    }
  }

  // Interior reference level for the deficit.
  const SamplePlan plan = build_plan(chart.box(), 32, seed, 1e-3, [&](const VecD& q2) {
    return norm2(q2) > model.exclusion_radius;
  });
  std::vector<double> interior;
  for (std::size_t k = 0; k < plan.points.size(); ++k) {
    const VecD x = raw_vector(plan.arg_seed, k, 0, model.dim);
    interior.push_back(
        max_abs(hamiltonian_deficit(chart, chart.two_form("phi"), sigma, plan.points[k], x)));
  }
  std::sort(interior.begin(), interior.end());
  out.interior_median_deficit = interior[interior.size() / 2];
  return out;
}

}  // namespace kver
