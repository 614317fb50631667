#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kver/derived.hpp"
#include "kver/hamiltonian.hpp"
#include "kver/killing.hpp"
#include "kver/models.hpp"
#include "kver/sampling.hpp"

using namespace kver;

namespace {

const Model& cp2() {
  static Model m = build_model("cp2-radial");
  return m;
}

bool outside_core(const Model& m, const VecD& p) {
  return m.exclusion_radius == 0.0 || norm2(p) > m.exclusion_radius;
}

// d tau ^ d^c tau without the (tau-c)/Q factor; not of momentum type.
MatrixField bare_wedge_form(const Model& m) {
  const MatrixField g = m.chart.metric();
  const MatrixField j = m.chart.complex_structure();
  const ScalarField tau = m.chart.scalar("tau");
  return make_matrix_field([g, j, tau]<class T>(const Vec<T>& x) {
    const Mat<T> jx = j.eval(x);
    const Vec<T> dt = coordinate_gradient(tau, x);
    Vec<T> dct = zero_vec<T>(x.n);
    for (int a = 0; a < x.n; ++a) {
      T s = dual_const<T>(0.0);
      for (int b = 0; b < x.n; ++b) s = s + dt[b] * jx(b, a);
      dct[a] = -s;
    }
    return outer(dt, dct) - outer(dct, dt);
  });
}

}  // namespace

TEST_CASE("trace normalization: omega traces to n, zero traces to zero") {
  for (const char* id : {"cp2-radial", "cp3-radial", "calabi-dim6"}) {
    const Model m = build_model(id);
    const MatrixField zero =
        make_matrix_field([]<class T>(const Vec<T>& x) { return zero_mat<T>(x.n); });
    const SamplePlan plan = build_plan(m.chart.box(), 10, 3, 1e-3);
    for (const VecD& p : plan.points) {
      CHECK(trace_sigma(m.chart, m.chart.two_form("omega"), p) ==
            doctest::Approx(m.dim / 2.0).epsilon(1e-12));
      CHECK(trace_sigma(m.chart, zero, p) == 0.0);
    }
  }
}

TEST_CASE("trace of the momentum form is tau - c") {
  for (const char* id : {"cp2-radial", "calabi-dim4", "calabi-dim6"}) {
    const Model m = build_model(id);
    const SamplePlan plan = build_plan(m.chart.box(), 50, 5, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst = 0.0;
    for (const VecD& p : plan.points) {
      const double sigma = trace_sigma(m.chart, m.chart.two_form("phi"), p);
      worst = std::max(worst, std::abs(sigma - m.chart.scalar("mu").eval(p)));
    }
    CAPTURE(id);
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("two-form J-invariance of the model forms") {
  const Model& m = cp2();
  const SamplePlan plan = build_plan(m.chart.box(), 30, 7, 1e-3, [&](const VecD& q) {
    return outside_core(m, q);
  });
  for (const VecD& p : plan.points) {
    CHECK(two_form_j_invariance_residual(m.chart, m.chart.two_form("phi"), p) < 1e-10);
    CHECK(two_form_j_invariance_residual(m.chart, m.chart.two_form("omega"), p) < 1e-12);
  }
}

TEST_CASE("deficit: the Kahler form satisfies the identity trivially") {
  const Model& m = cp2();
  const ScalarField sigma = trace_sigma_field(m.chart.metric(), m.chart.complex_structure(),
                                              m.chart.two_form("omega"));
  const SamplePlan plan = build_plan(m.chart.box(), 10, 11, 1e-3);
  for (std::size_t k = 0; k < plan.points.size(); ++k) {
    const VecD x = raw_vector(plan.arg_seed, k, 0, 4);
    CHECK(max_abs(hamiltonian_deficit(m.chart, m.chart.two_form("omega"), sigma,
                                      plan.points[k], x)) < 1e-12);
  }
}

TEST_CASE("deficit: momentum form per direction class at 1000 tuples") {
  for (const char* id : {"cp2-radial", "calabi-dim4", "calabi-dim6"}) {
    const Model m = build_model(id);
    const MatrixField& phi = m.chart.two_form("phi");
    const ScalarField sigma =
        trace_sigma_field(m.chart.metric(), m.chart.complex_structure(), phi);
    const int n_points = id == std::string("cp2-radial") ? 1000 : 250;
    const SamplePlan plan = build_plan(m.chart.box(), n_points, 13, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst_random = 0.0, worst_a = 0.0, worst_b1 = 0.0, worst_b2 = 0.0, worst_b1_raw = 0.0;
    for (std::size_t k = 0; k < plan.points.size(); ++k) {
      const VecD& p = plan.points[k];
      const PointFrame fr = point_frame(m.chart, p);
      const VecD x_rand = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 0, m.dim));
      worst_random =
          std::max(worst_random, max_abs(hamiltonian_deficit(m.chart, phi, sigma, p, x_rand)));

      // (a) horizontal direction
      const VecD xh = g_normalize(
          fr.g, matvec(m.chart.endo("PH").eval(p), raw_vector(plan.arg_seed, k, 1, m.dim)));
      worst_a = std::max(worst_a, max_abs(hamiltonian_deficit(m.chart, phi, sigma, p, xh)));

      // (b)(1) X = J grad tau: the covariant derivative itself vanishes
      const VecD xi = m.chart.vector("xi").eval(p);
      worst_b1 = std::max(worst_b1, max_abs(hamiltonian_deficit(m.chart, phi, sigma, p, xi)));
      worst_b1_raw = std::max(worst_b1_raw, max_abs(cov_deriv_two_form(m.chart, phi, xi, p)));

      // (b)(2) X = grad tau
      const VecD gt = m.chart.vector("V1").eval(p);
      worst_b2 = std::max(worst_b2, max_abs(hamiltonian_deficit(m.chart, phi, sigma, p, gt)));
    }
    CAPTURE(id);
    CHECK(worst_random < 1e-8);
    CHECK(worst_a < 1e-8);
    CHECK(worst_b1 < 1e-8);
    CHECK(worst_b1_raw < 1e-8);  // nabla_{J grad tau} phi = 0
    CHECK(worst_b2 < 1e-8);
  }
}

TEST_CASE("deficit: dropping the (tau-c)/Q factor breaks the identity") {
  const Model& m = cp2();
  const MatrixField bad = bare_wedge_form(m);
  const ScalarField sigma =
      trace_sigma_field(m.chart.metric(), m.chart.complex_structure(), bad);
  const SamplePlan plan = build_plan(m.chart.box(), 20, 17, 1e-3, [&](const VecD& q) {
    return outside_core(m, q);
  });
  double biggest = 0.0;
  for (std::size_t k = 0; k < plan.points.size(); ++k) {
    const VecD x = g_normalize(point_frame(m.chart, plan.points[k]).g,
                               raw_vector(plan.arg_seed, k, 0, 4));
    biggest =
        std::max(biggest, max_abs(hamiltonian_deficit(m.chart, bad, sigma, plan.points[k], x)));
  }
  CHECK(biggest > 1e-3);
}

TEST_CASE("cyclic consequence holds and is implied by the pointwise identity") {
  for (const char* id : {"cp2-radial", "calabi-dim6", "product-cp1-cp1"}) {
    const Model m = build_model(id);
    const MatrixField phi =
        m.has_potential
            ? m.chart.two_form("phi")
            : phi_from_s(m.chart.metric(), m.chart.complex_structure(), m.chart.endo("S"),
                         m.chart.scalar("mu"));
    const ScalarField sigma =
        trace_sigma_field(m.chart.metric(), m.chart.complex_structure(), phi);
    const SamplePlan plan = build_plan(m.chart.box(), 200, 19, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst = 0.0;
    int implied = 0;
    for (std::size_t k = 0; k < plan.points.size(); ++k) {
      const VecD& p = plan.points[k];
      const PointFrame fr = point_frame(m.chart, p);
      const VecD x = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 0, m.dim));
      const VecD y = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 1, m.dim));
      const VecD z = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 2, m.dim));
      const double cyc = cyclic_consequence_residual(m.chart, phi, sigma, p, x, y, z);
      worst = std::max(worst, std::abs(cyc));
      if (max_abs(hamiltonian_deficit(m.chart, phi, sigma, p, x)) < 1e-9)
        implied += std::abs(cyc) < 1e-8 ? 1 : -1000000;
    }
    CAPTURE(id);
    CHECK(worst < 1e-8);
    CHECK(implied == static_cast<int>(plan.points.size()));
  }
}

TEST_CASE("s_from_phi: the Kahler form produces (1-n) Identity") {
  const Model& m = cp2();
  const MatrixField s =
      s_from_phi(m.chart.metric(), m.chart.complex_structure(), m.chart.two_form("omega"));
  const int n = m.dim / 2;
  const SamplePlan plan = build_plan(m.chart.box(), 10, 23, 1e-3);
  for (std::size_t k = 0; k < plan.points.size(); ++k) {
    const VecD& p = plan.points[k];
    CHECK(max_abs(s.eval(p) - identity<double>(4) * double(1 - n)) < 1e-12);
    const VecD x = raw_vector(plan.arg_seed, k, 0, 4);
    const VecD y = raw_vector(plan.arg_seed, k, 1, 4);
    const VecD z = raw_vector(plan.arg_seed, k, 2, 4);
    CHECK(std::abs(cyclic_killing_residual(m.chart, s, p, x, y, z)) < 1e-12);
  }
}

TEST_CASE("s_from_phi: momentum form gives a Killing tensor with eigenvalues (0, -mu)") {
  const Model& m = cp2();
  const MatrixField s =
      s_from_phi(m.chart.metric(), m.chart.complex_structure(), m.chart.two_form("phi"));
  const SamplePlan plan = build_plan(m.chart.box(), 100, 29, 1e-3, [&](const VecD& q) {
    return outside_core(m, q);
  });
  double worst = 0.0, worst_eig = 0.0;
  for (std::size_t k = 0; k < plan.points.size(); ++k) {
    const VecD& p = plan.points[k];
    const PointFrame fr = point_frame(m.chart, p);
    const VecD x = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 0, 4));
    const VecD y = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 1, 4));
    const VecD z = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 2, 4));
    worst = std::max(worst, std::abs(cyclic_killing_residual(m.chart, s, p, x, y, z)));

    const EigenSplit es = eigensplit(m.chart, s, p, 0.0);
    worst_eig = std::max(worst_eig, std::abs(es.lambda));
    worst_eig = std::max(worst_eig, std::abs(es.mu + m.chart.scalar("mu").eval(p)));
    CHECK(es.vertical.size() == 2u);
    CHECK(es.horizontal.size() == 2u);
  }
  CHECK(worst < 1e-8);
  CHECK(worst_eig < 1e-9);
}

TEST_CASE("phi_from_s: passes the identity and matches the momentum form up to orientation") {
  for (const char* id : {"cp2-radial", "calabi-dim4"}) {
    const Model m = build_model(id);
    const MatrixField phi1 = phi_from_s(m.chart.metric(), m.chart.complex_structure(),
                                        m.chart.endo("S"), m.chart.scalar("mu"));
    const ScalarField sigma =
        trace_sigma_field(m.chart.metric(), m.chart.complex_structure(), phi1);
    const SamplePlan plan = build_plan(m.chart.box(), 100, 31, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double worst = 0.0, worst_match = 0.0, worst_sigma = 0.0;
    for (std::size_t k = 0; k < plan.points.size(); ++k) {
      const VecD& p = plan.points[k];
      const PointFrame fr = point_frame(m.chart, p);
      const VecD x = g_normalize(fr.g, raw_vector(plan.arg_seed, k, 0, m.dim));
      worst = std::max(worst, max_abs(hamiltonian_deficit(m.chart, phi1, sigma, p, x)));
      // With omega(X,Y) = g(JX,Y) and (d^c f)(X) = -df(JX) the conversion
      // lands on the opposite orientation of mu dmu ^ d^c mu / Q.
      const double flip = -1.0;
      worst_match =
          std::max(worst_match, max_abs(phi1.eval(p) - m.chart.two_form("phi").eval(p) * flip));
      worst_sigma = std::max(
          worst_sigma, std::abs(sigma.eval(p) - flip * m.chart.scalar("mu").eval(p)));
    }
    CAPTURE(id);
    CHECK(worst < 1e-8);
    CHECK(worst_match < 1e-8);
    CHECK(worst_sigma < 1e-9);
  }
}

TEST_CASE("round trip s_from_phi(phi_from_s(S)) differs from S by a constant shift") {
  for (const char* id : {"cp2-radial", "calabi-dim6"}) {
    const Model m = build_model(id);
    const MatrixField phi1 = phi_from_s(m.chart.metric(), m.chart.complex_structure(),
                                        m.chart.endo("S"), m.chart.scalar("mu"));
    const MatrixField s2 = s_from_phi(m.chart.metric(), m.chart.complex_structure(), phi1);
    const SamplePlan plan = build_plan(m.chart.box(), 60, 37, 1e-3, [&](const VecD& q) {
      return outside_core(m, q);
    });
    double lo = 1e300, hi = -1e300, worst_off = 0.0;
    for (const VecD& p : plan.points) {
      const MatD diff = s2.eval(p) - m.chart.endo("S").eval(p);
      const double shift = trace(diff) / m.dim;
      lo = std::min(lo, shift);
      hi = std::max(hi, shift);
      worst_off = std::max(worst_off, max_abs(diff - identity<double>(m.dim) * shift));
    }
    CAPTURE(id);
    CHECK(hi - lo < 1e-9);   // the shift is constant over the chart
    CHECK(worst_off < 1e-9);  // and the difference is exactly that shift
    CHECK(std::abs(lo) < 1e-9);  // here it is in fact zero
  }
}

TEST_CASE("product models: the converted form is parallel, any dimension") {
  for (const char* id : {"product-cp1-cp1", "product-cp1-cp2"}) {
    const Model m = build_model(id);
    const MatrixField phi = phi_from_s(m.chart.metric(), m.chart.complex_structure(),
                                       m.chart.endo("S"), m.chart.scalar("mu"));
    const ScalarField sigma =
        trace_sigma_field(m.chart.metric(), m.chart.complex_structure(), phi);
    const SamplePlan plan = build_plan(m.chart.box(), 30, 41, 1e-3);
    for (std::size_t k = 0; k < plan.points.size(); ++k) {
      const VecD& p = plan.points[k];
      const VecD x = raw_vector(plan.arg_seed, k, 0, m.dim);
      CHECK(max_abs(cov_deriv_two_form(m.chart, phi, x, p)) < 1e-12);
      CHECK(max_abs(hamiltonian_deficit(m.chart, phi, sigma, p, x)) < 1e-12);
    }
  }
}

TEST_CASE("dimension-4 pairing with a nonzero constant eigenvalue via spectrum shift") {
  const Model& m = cp2();
  const double lambda = 0.75;
  // S + lambda I has eigenvalues (lambda, mu + lambda); the paired form
  // subtracts the eigenvalue sum against omega.
  const MatrixField s_shift = shift_spectrum(m.chart.endo("S"), -lambda);
  const ScalarField mu = m.chart.scalar("mu");
  const ScalarField eig_sum = make_scalar_field([mu, lambda]<class T>(const Vec<T>& x) -> T {
    return mu.eval(x) + 2.0 * lambda;
  });
  const MatrixField phi =
      phi_from_s(m.chart.metric(), m.chart.complex_structure(), s_shift, eig_sum);
  const ScalarField sigma =
      trace_sigma_field(m.chart.metric(), m.chart.complex_structure(), phi);
  const SamplePlan plan = build_plan(m.chart.box(), 60, 43, 1e-3, [&](const VecD& q) {
    return outside_core(m, q);
  });
  double worst = 0.0;
  for (std::size_t k = 0; k < plan.points.size(); ++k) {
    const VecD& p = plan.points[k];
    const VecD x = g_normalize(point_frame(m.chart, p).g, raw_vector(plan.arg_seed, k, 0, 4));
    worst = std::max(worst, max_abs(hamiltonian_deficit(m.chart, phi, sigma, p, x)));
  }
  CHECK(worst < 1e-8);
}
