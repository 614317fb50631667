#include "kver/foliation.hpp"

#include <algorithm>
#include <cmath>

#include "kver/errors.hpp"

namespace kver {

namespace {

constexpr double kMuFloor = 1e-9;

VecD project(const MatD& proj, const VecD& v) { return matvec(proj, v); }

VecD perp_part(const MatD& proj, const VecD& v) { return v - matvec(proj, v); }

double omega_pair(const PointFrame& fr, const VecD& x, const VecD& y) {
  return g_inner(fr.g, matvec(fr.J, x), y);
}

double g_norm(const MatD& g, const VecD& v) { return std::sqrt(std::max(0.0, pair(g, v, v))); }

// Deterministic g-orthonormal frame of a rank-2 projector: project the
// coordinate axes, pick the best-conditioned pair, Gram-Schmidt.
std::pair<VecD, VecD> plane_frame(const PointFrame& fr, const MatD& proj) {
  const int n = fr.p.n;
  int first = -1;
  double best = 0.1;
  for (int a = 0; a < n; ++a) {
    VecD e = zero_vec<double>(n);
    e[a] = 1.0;
    const VecD pe = project(proj, e);
    const double norm = g_norm(fr.g, pe);
    if (norm > best) {
      best = norm;
      first = a;
    }
  }
  if (first < 0) throw DimensionMismatch("projector has no visible plane at this point");
  VecD e1 = zero_vec<double>(n);
  e1[first] = 1.0;
  e1 = g_normalize(fr.g, project(proj, e1));

  int second = -1;
  best = 0.1;
  for (int a = 0; a < n; ++a) {
    if (a == first) continue;
    VecD e = zero_vec<double>(n);
    e[a] = 1.0;
    VecD pe = project(proj, e);
    pe = pe - e1 * g_inner(fr.g, pe, e1);
    const double norm = g_norm(fr.g, pe);
    if (norm > best) {
      best = norm;
      second = a;
    }
  }
  if (second < 0) throw DimensionMismatch("projector is not rank 2 at this point");
  VecD e2 = zero_vec<double>(n);
  e2[second] = 1.0;
  VecD p2 = project(proj, e2);
  p2 = p2 - e1 * g_inner(fr.g, p2, e1);
  return {e1, g_normalize(fr.g, p2)};
}

}  // namespace

Vec<D1> projected_extension_jet(const MatrixField& proj, const VecD& v, const VecD& p) {
  const Mat<D1> pj = proj.eval(seed_point<D1>(p));
  Vec<D1> out;
  out.n = p.n;
  for (int i = 0; i < p.n; ++i) {
    D1 acc{};
    for (int j = 0; j < p.n; ++j) acc = acc + pj(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double totally_geodesic_residual(const ChartDomain& chart, const MatrixField& proj,
                                 const VecD& p, const VecD& x_raw) {
  const PointFrame fr = point_frame(chart, p);
  const MatD pm = proj.eval(p);
  const VecD x = g_normalize(fr.g, project(pm, x_raw));
  const VecD nabla = cov_deriv_vector(fr, projected_extension_jet(proj, x, p), x);
  return g_norm(fr.g, perp_part(pm, nabla));
}

UmbilicalResult umbilical_identity_residual(const ChartDomain& chart, const MatrixField& proj,
                                            const VecD& p, const VecD& x_raw,
                                            const VecD& y_raw) {
  const PointFrame fr = point_frame(chart, p);
  const MatD pm = proj.eval(p);
  const double rank = trace(pm);
  if (std::abs(rank - 2.0) > 1e-6)
    throw DimensionMismatch("umbilical identity requires a 2-dimensional distribution");

  const auto [e1, e2] = plane_frame(fr, pm);
  const VecD n1 = cov_deriv_vector(fr, projected_extension_jet(proj, e1, p), e1);
  const VecD n2 = cov_deriv_vector(fr, projected_extension_jet(proj, e2, p), e2);

  UmbilicalResult out;
  out.mean_curvature = (perp_part(pm, n1) + perp_part(pm, n2));  // mean of 2*(...)_perp
  const VecD x = g_normalize(fr.g, project(pm, x_raw));
  const VecD y = g_normalize(fr.g, project(pm, y_raw));
  const VecD nxy = cov_deriv_vector(fr, projected_extension_jet(proj, y, p), x);

  VecD res = perp_part(pm, nxy) * 2.0;
  const double gxy = g_inner(fr.g, x, y);
  const double wxy = omega_pair(fr, x, y);
  const VecD jxi = matvec(fr.J, out.mean_curvature);
  for (int i = 0; i < p.n; ++i) res[i] -= gxy * out.mean_curvature[i] + wxy * jxi[i];
  out.residual = g_norm(fr.g, res);
  return out;
}

double integrability_residual(const ChartDomain& chart, const VectorField& e1,
                              const VectorField& e2, const MatrixField& proj, const VecD& p) {
  const PointFrame fr = point_frame(chart, p);
  const VecD bracket = lie_bracket(chart, e1, e2, p);
  return g_norm(fr.g, perp_part(proj.eval(p), bracket));
}

double conformal_residual(const ChartDomain& chart, const MatrixField& pv,
                          const MatrixField& ph, const ScalarField& mu, const VecD& p,
                          const VecD& v_raw, const VecD& x_raw, const VecD& y_raw) {
  const PointFrame fr = point_frame(chart, p);
  const double mu_val = mu.eval(p);
  if (std::abs(mu_val) < kMuFloor)
    throw MuVanishes("conformal residual: d log|mu| undefined where mu vanishes");

  const MatD pvm = pv.eval(p);
  const MatD phm = ph.eval(p);
  const VecD v = g_normalize(fr.g, project(pvm, v_raw));
  const VecD x = g_normalize(fr.g, project(phm, x_raw));
  const VecD y = g_normalize(fr.g, project(phm, y_raw));

  const Vec<D1> vext = projected_extension_jet(pv, v, p);
  const double lie = g_inner(fr.g, cov_deriv_vector(fr, vext, x), y) +
                     g_inner(fr.g, cov_deriv_vector(fr, vext, y), x);
  const double theta_v = dot(coordinate_gradient(mu, p), v) / mu_val;
  return lie - theta_v * g_inner(fr.g, x, y);
}

double d_covector_residual(const ChartDomain& chart, const VectorField& w, const VecD& p) {
  (void)chart;
  const Vec<D1> wj = w.eval(seed_point<D1>(p));
  double worst = 0.0;
  for (int a = 0; a < p.n; ++a)
    for (int b = a + 1; b < p.n; ++b)
      worst = std::max(worst, std::abs(wj[b].d[a] - wj[a].d[b]));
  return worst;
}

VectorField theta_covector_field(ScalarField mu) {
  return make_vector_field([mu = std::move(mu)]<class T>(const Vec<T>& x) {
    const T m = mu.eval(x);
    if (std::abs(value_of(m)) < kMuFloor)
      throw MuVanishes("theta covector: d log|mu| undefined where mu vanishes");
    const Vec<T> dmu = coordinate_gradient(mu, x);
    Vec<T> theta = zero_vec<T>(x.n);
    for (int a = 0; a < x.n; ++a) theta[a] = dmu[a] / m;
    return theta;
  });
}

double homothetic_residual(const ChartDomain& chart, const ScalarField& mu, const VecD& p) {
  if (std::abs(mu.eval(p)) < kMuFloor)
    throw MuVanishes("homothetic residual: d log|mu| undefined where mu vanishes");
  return d_covector_residual(chart, theta_covector_field(mu), p);
}

double holomorphic_foliation_residual(const ChartDomain& chart, const MatrixField& pv,
                                      const VecD& p, const VecD& x, const VecD& v_raw) {
  const PointFrame fr = point_frame(chart, p);
  const MatD pvm = pv.eval(p);
  const VecD v = g_normalize(fr.g, project(pvm, v_raw));
  const Vec<D1> vext = projected_extension_jet(pv, v, p);
  const VecD jx = matvec(fr.J, x);
  const VecD term = cov_deriv_vector(fr, vext, jx) -
                    matvec(fr.J, cov_deriv_vector(fr, vext, x));
  return g_norm(fr.g, perp_part(pvm, term));
}

StructureIdentityResult structure_identity_residual(const ChartDomain& chart,
                                                    const MatrixField& pv,
                                                    const MatrixField& ph,
                                                    const ScalarField& mu, const VecD& p,
                                                    const VecD& x_raw, const VecD& y_raw) {
  const PointFrame fr = point_frame(chart, p);
  const double mu_val = mu.eval(p);
  if (std::abs(mu_val) < kMuFloor)
    throw MuVanishes("structure identity: theta undefined where mu vanishes");

  const MatD pvm = pv.eval(p);
  const MatD phm = ph.eval(p);
  const VecD x = g_normalize(fr.g, project(phm, x_raw));
  const VecD y = g_normalize(fr.g, project(phm, y_raw));

  const VecD nxy = cov_deriv_vector(fr, projected_extension_jet(ph, y, p), x);
  const VecD vert = project(pvm, nxy) * 2.0;

  const VecD theta_sharp = matvec(fr.ginv, coordinate_gradient(mu, p)) * (1.0 / mu_val);
  const VecD j_theta = matvec(fr.J, theta_sharp);
  const double gxy = g_inner(fr.g, x, y);
  const double wxy = omega_pair(fr, x, y);

  StructureIdentityResult out;
  VecD res = vert;
  for (int i = 0; i < p.n; ++i) res[i] += gxy * theta_sharp[i] + wxy * j_theta[i];
  out.residual = g_norm(fr.g, res);

  const double theta2 = g_inner(fr.g, theta_sharp, theta_sharp);
  if (theta2 < 1e-24) throw MuVanishes("structure identity: theta vanishes at this point");
  VecD num = vert;
  for (int i = 0; i < p.n; ++i) num[i] += gxy * theta_sharp[i];
  out.alpha = g_inner(fr.g, num, j_theta) / theta2;
  out.omega_xy = wxy;
  return out;
}

}  // namespace kver
