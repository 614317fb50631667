#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kver/kahler.hpp"
#include "kver/model_checks.hpp"
#include "kver/models.hpp"
#include "kver/sampling.hpp"

using namespace kver;

namespace {

bool outside_core(const Model& m, const VecD& p) {
  return m.exclusion_radius == 0.0 || norm2(p) > m.exclusion_radius;
}

}  // namespace

TEST_CASE("catalog: all default instances construct and pass the gate") {
  const std::vector<std::string> ids = default_instances();
  CHECK(ids.size() == 7u);
  for (const std::string& id : ids) {
    const Model m = build_model(id);
    CHECK(m.dim >= 4);
    CHECK(m.chart.dim() == m.dim);
  }
  CHECK(model_catalog().size() == 3u);  // three families
}

TEST_CASE("constructor contracts reject bad parameters") {
  FsParams fs;
  fs.n = 1;
  CHECK_THROWS_AS((void)make_fubini_study_radial(fs), BadParameters);
  fs.n = 2;
  fs.scale = -1.0;
  CHECK_THROWS_AS((void)make_fubini_study_radial(fs), BadParameters);

  CalabiParams cal;
  cal.c = 1.5;  // tau_min must exceed c
  CHECK_THROWS_AS((void)make_calabi_local(cal), BadParameters);
  CHECK_THROWS_AS((void)build_model("no-such-model"), BadParameters);
}

TEST_CASE("require_kahler rejects a broken chart") {
  const Model good = build_model("cp2-radial");
  const MatrixField broken = make_matrix_field([base = good.chart.metric()]<class T>(
                                                   const Vec<T>& x) {
    Mat<T> g = base.eval(x);
    g(0, 0) = g(0, 0) + 0.05;  // not J-invariant
    return g;
  });
  const ChartDomain bad(good.chart.box(), broken, good.chart.complex_structure());
  CHECK_THROWS_AS(require_kahler(bad, "test chart"), NotKahler);
}

TEST_CASE("momentum profiles: endpoint data and negative control") {
  const MomentumProfile quad = quadratic_profile(1.0, 1.0, 2.0);
  const ProfileCheck c1 = profile_endpoint_check(quad);
  CHECK(c1.ok);
  CHECK(c1.endpoint_value_error < 1e-12);
  CHECK(c1.slope_error < 1e-10);
  CHECK(c1.min_interior_value > 0.0);
  // slopes of the default quadratic are +2 and -2
  const D1 at_min = quad.eval(dual_var<D1>(1.0, 0));
  const D1 at_max = quad.eval(dual_var<D1>(2.0, 0));
  CHECK(at_min.d[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(at_max.d[0] == doctest::Approx(-2.0).epsilon(1e-14));

  const MomentumProfile sine = sine_profile(0.7, -1.0, 3.0);
  CHECK(profile_endpoint_check(sine).ok);

  // unequal slope magnitudes violate the contract
  const MomentumProfile skew = custom_profile(
      [](const auto& t) { return (t - 0.0) * (1.0 - t) * (t * 0.5 + 1.0) * 2.0; }, 1.0, 0.0,
      1.0, "skewed");
  const ProfileCheck c2 = profile_endpoint_check(skew);
  CHECK(!c2.ok);
  CHECK(c2.violation == "endpoint slopes are not +2a / -2a");
  CHECK_THROWS_AS(require_valid_profile(skew), ProfileInvalid);
}

TEST_CASE("radial model: special-potential conditions") {
  for (const char* id : {"cp2-radial", "cp3-radial", "calabi-dim4", "calabi-dim6"}) {
    const Model m = build_model(id);
    const SamplePlan plan = build_plan(m.chart.box(), 80, 3, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst_spread = 0.0, worst_killing = 0.0, worst_holo = 0.0;
    for (std::size_t k = 0; k < plan.points.size(); ++k) {
      const VecD& p = plan.points[k];
      worst_spread = std::max(worst_spread, hessian_horizontal_spread(m.chart, m.chart.scalar("tau"),
                                                                      m.chart.endo("PH"), p));
      const VecD x = raw_vector(plan.arg_seed, k, 0, m.dim);
      const VecD y = raw_vector(plan.arg_seed, k, 1, m.dim);
      worst_killing = std::max(
          worst_killing, std::abs(killing_field_residual(m.chart, m.chart.vector("xi"), p, x, y)));
      worst_holo =
          std::max(worst_holo, holomorphic_field_residual(m.chart, m.chart.vector("xi"), p));
    }
    CAPTURE(id);
    CHECK(worst_spread < 1e-8);
    CHECK(worst_killing < 1e-9);
    CHECK(worst_holo < 1e-9);
  }
}

TEST_CASE("dimension-4 models: grad tau is a Ricci eigenfield") {
  for (const char* id : {"cp2-radial", "calabi-dim4"}) {
    const Model m = build_model(id);
    const SamplePlan plan = build_plan(m.chart.box(), 40, 5, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst = 0.0;
    for (const VecD& p : plan.points)
      worst = std::max(worst, ricci_eigenfield_residual(m.chart, m.chart.scalar("tau"), p));
    CAPTURE(id);
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("perturbed potential loses the common-eigenvalue property at order epsilon") {
  const Model m = build_model("cp2-radial");
  const double eps = 1e-4;
  const ScalarField tau = m.chart.scalar("tau");
  const ScalarField bad = make_scalar_field([tau, eps]<class T>(const Vec<T>& x) -> T {
    return tau.eval(x) + x[0] * x[0] * x[2] * eps;  // anisotropic term
  });
  const SamplePlan plan = build_plan(m.chart.box(), 20, 7, 1e-3, [&](const VecD& q) {
    return outside_core(m, q);
  });
  double biggest = 0.0;
  for (const VecD& p : plan.points)
    biggest = std::max(biggest, hessian_horizontal_spread(m.chart, bad, m.chart.endo("PH"), p));
  CHECK(biggest > 0.01 * eps);
  CHECK(biggest < 100.0 * eps);
}

TEST_CASE("warped-chart relations at 1000 samples") {
  for (const char* id : {"calabi-dim4", "calabi-dim6", "cp2-radial"}) {
    const Model m = build_model(id);
    const int n_points = m.family == ModelFamily::calabi ? 1000 : 300;
    const SamplePlan plan = build_plan(m.chart.box(), n_points, 11, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst31 = 0.0, worst32 = 0.0;
    for (const VecD& p : plan.points) {
      worst31 = std::max(worst31, relation_q_theta_residual(m, p));
      worst32 = std::max(worst32, relation_dq_lambda_residual(m, p));
    }
    CAPTURE(id);
    CHECK(worst31 < 1e-8);
    CHECK(worst32 < 1e-8);
  }
}

TEST_CASE("theta consistency: the two expressions for theta coincide") {
  for (const char* id : {"cp2-radial", "calabi-dim4", "calabi-dim6"}) {
    const Model m = build_model(id);
    const SamplePlan plan = build_plan(m.chart.box(), 100, 13, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst = 0.0;
    for (const VecD& p : plan.points)
      worst = std::max(worst, theta_consistency_residual(m, p));
    CAPTURE(id);
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("product model: the tensor is exactly parallel") {
  for (const char* id : {"product-cp1-cp1", "product-cp1-cp2"}) {
    const Model m = build_model(id);
    const SamplePlan plan = build_plan(m.chart.box(), 40, 17, 1e-3);
    for (std::size_t k = 0; k < plan.points.size(); ++k) {
      const VecD x = raw_vector(plan.arg_seed, k, 0, m.dim);
      CHECK(max_abs(cov_deriv_endo(m.chart, m.chart.endo("S"), x, plan.points[k])) == 0.0);
    }
  }
}

TEST_CASE("product model with mu = 0: everything degenerates to zero") {
  const Model m = build_model("product-cp1-cp1-mu0");
  CHECK(m.mu0 == 0.0);
  const SamplePlan plan = build_plan(m.chart.box(), 20, 19, 1e-3);
  for (const VecD& p : plan.points) {
    CHECK(max_abs(m.chart.endo("S").eval(p)) == 0.0);
    CHECK(m.chart.scalar("mu").eval(p) == 0.0);
  }
}

TEST_CASE("boundedness scan: the ratio approaches 1/(2a) and S collapses") {
  for (const char* id : {"cp2-radial", "cp3-radial"}) {
    const Model m = build_model(id);
    const BoundednessScan scan = boundedness_scan(m, 16, 12, 1e-3, 0.05, 23);
    CAPTURE(id);
    CHECK(scan.limit == doctest::Approx(0.25));  // a = 2 for the radial family
    CHECK(scan.max_ratio_rel_error < 0.10);
    CHECK(scan.points_scanned >= 16 * 12);
    // |S|_op equals |mu| for this tensor and mu ~ scale * r^2 near the origin
    CHECK(scan.s_norm_at_smallest_radius ==
          doctest::Approx(scan.mu_at_smallest_radius).epsilon(1e-10));
    CHECK(scan.mu_at_smallest_radius < m.params.at("scale") * 1e-3 * 1e-3 * 1.01);
    // the identity deficit does not blow up approaching the origin
    CHECK(scan.max_deficit_near_origin <
          std::max(10.0 * scan.interior_median_deficit, 1e-12));
  }
}

TEST_CASE("radial momentum profile: Q = 4 mu (s - mu) / s along every ray") {
  const Model m = build_model("cp2-radial");
  const double s = m.params.at("scale");
  const SamplePlan plan = build_plan(m.chart.box(), 50, 29, 1e-3, [&](const VecD& q) {
    return outside_core(m, q);
  });
  for (const VecD& p : plan.points) {
    const double mu = m.chart.scalar("mu").eval(p);
    const double q = m.chart.scalar("Q").eval(p);
    CHECK(q == doctest::Approx(4.0 * mu * (s - mu) / s).epsilon(1e-11));
  }
}

TEST_CASE("calabi chart: registered profile matches the derived gradient norm") {
  const Model m = build_model("calabi-dim6");
  const SamplePlan plan = build_plan(m.chart.box(), 40, 31, 1e-3);
  for (const VecD& p : plan.points) {
    CHECK(m.chart.scalar("Q").eval(p) ==
          doctest::Approx(m.chart.scalar("Q_profile").eval(p)).epsilon(1e-11));
  }
}

TEST_CASE("every registered scalar field evaluates through third derivatives") {
  const Model m = build_model("calabi-dim4");
  const SamplePlan plan = build_plan(m.chart.box(), 3, 37, 1e-3);
  for (const char* name : {"tau", "mu", "Q"}) {
    for (const VecD& p : plan.points) {
      const D3 jet = m.chart.scalar(name).eval(seed_point<D3>(p));
      CHECK(std::isfinite(value_of(jet.d[0].d[1].d[2])));
    }
  }
  // matrix fields carry two orders beyond their value
  for (const VecD& p : plan.points) {
    const Mat<D3> sj = m.chart.endo("S").eval(seed_point<D3>(p));
    CHECK(std::isfinite(value_of(sj(0, 1).d[0].d[1].d[2])));
    const Mat<D3> pj = m.chart.two_form("phi").eval(seed_point<D3>(p));
    CHECK(std::isfinite(value_of(pj(0, 1).d[0].d[1].d[2])));
  }
}
