#include "kver/models.hpp"

#include <cmath>
#include <utility>

#include "kver/derived.hpp"
#include "kver/errors.hpp"
#include "kver/geometry.hpp"
#include "kver/kahler.hpp"
#include "kver/sampling.hpp"

namespace kver {

MatD standard_complex_structure(int dim) {
  MatD j = zero_mat<double>(dim);
  for (int k = 0; k + 1 < dim; k += 2) {
    j(k + 1, k) = 1.0;   // J e_{2k}   =  e_{2k+1}
    j(k, k + 1) = -1.0;  // J e_{2k+1} = -e_{2k}
  }
  return j;
}

namespace {

Box cube(int dim, double half_width) {
  Box b;
  b.n = dim;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = -half_width;
    b.hi[i] = half_width;
  }
  return b;
}

template <class T>
Vec<T> apply_const(const MatD& m, const Vec<T>& x) {
  Vec<T> r = zero_vec<T>(x.n);
  for (int i = 0; i < m.n; ++i) {
    T s = dual_const<T>(0.0);
    for (int j = 0; j < m.n; ++j)
      if (m(i, j) != 0.0) s = s + x[j] * m(i, j);
    r[i] = s;
  }
  return r;
}

template <class T>
Vec<T> slice(const Vec<T>& x, int offset, int len) {
  Vec<T> r;
  r.n = len;
  for (int i = 0; i < len; ++i) r[i] = x[offset + i];
  return r;
}

MatrixField constant_matrix_field(const MatD& m) {
  return make_matrix_field([m]<class T>(const Vec<T>& x) {
    Mat<T> r = zero_mat<T>(x.n);
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j) r(i, j) = dual_const<T>(m(i, j));
    return r;
  });
}

VectorField constant_vector_field(const VecD& v) {
  return make_vector_field([v]<class T>(const Vec<T>& x) {
    Vec<T> r = zero_vec<T>(x.n);
    for (int i = 0; i < v.n; ++i) r[i] = dual_const<T>(v[i]);
    return r;
  });
}

// ---- Fubini-Study pieces -----------------------------------------------------
//
// Affine chart of CP^n with real coordinates u = (x_1, y_1, ..., x_n, y_n),
// rho = |u|^2 and w = J u:
//
//   g_ij = s [ delta_ij / (1+rho) - (u_i u_j + w_i w_j) / (1+rho)^2 ]
//
// This is the J-invariant Hessian average of (s/2) log(1+rho), so the chart
// is Kahler by construction; the gate re-checks numerically.

template <class T>
Mat<T> fs_metric_at(int dim, double s, const MatD& j, const Vec<T>& x) {
  T rho = dual_const<T>(0.0);
  for (int i = 0; i < dim; ++i) rho = rho + x[i] * x[i];
  const T f1 = dual_const<T>(1.0) / (rho + 1.0);
  const T f2 = f1 * f1;
  const Vec<T> w = apply_const(j, x);
  Mat<T> g = zero_mat<T>(dim);
  for (int i = 0; i < dim; ++i)
    for (int k = i; k < dim; ++k) {
      T v = (x[i] * x[k] + w[i] * w[k]) * f2 * (-1.0);
      if (i == k) v = v + f1;
      v = v * s;
      g(i, k) = v;
      g(k, i) = v;
    }
  return g;
}

MatrixField fs_metric_field(int dim, double s) {
  const MatD j = standard_complex_structure(dim);
  return make_matrix_field(
      [dim, s, j]<class T>(const Vec<T>& x) { return fs_metric_at<T>(dim, s, j, x); });
}

ScalarField fs_radial_potential(int dim, double s, double c) {
  return make_scalar_field([dim, s, c]<class T>(const Vec<T>& x) -> T {
    T rho = dual_const<T>(0.0);
    for (int i = 0; i < dim; ++i) rho = rho + x[i] * x[i];
    return rho / (rho + 1.0) * s + c;
  });
}

ScalarField fs_kahler_potential(int dim, double s) {
  return make_scalar_field([dim, s]<class T>(const Vec<T>& x) -> T {
    using std::log;
    T rho = dual_const<T>(0.0);
    for (int i = 0; i < dim; ++i) rho = rho + x[i] * x[i];
    return log(rho + 1.0) * (0.5 * s);
  });
}

}  // namespace

void require_kahler(const ChartDomain& chart, const char* what, int samples, double tol) {
  const SamplePlan plan = build_plan(chart.box(), samples, /*seed=*/420, /*margin=*/1e-3);
  for (const VecD& p : plan.points) {
    if (min_eigenvalue(chart.metric().eval(p)) < kPdThreshold)
      throw NotKahler(std::string(what) + ": metric not positive definite");
    const KahlerPointResiduals r = kahler_residuals(chart, p);
    if (r.worst() > tol)
      throw NotKahler(std::string(what) + ": Kahler residual above construction tolerance");
  }
}

namespace {

void register_common_fields(Model& model, MatrixField g, MatrixField j, ScalarField tau) {
  ChartDomain& chart = model.chart;
  chart.add_scalar("tau", tau);
  const double c = model.c;
  chart.add_scalar("mu", make_scalar_field([tau, c]<class T>(const Vec<T>& x) -> T {
                     return tau.eval(x) - c;
                   }));
  chart.add_scalar("Q", grad_norm2_field(g, tau));
  MatrixField pv = vertical_projector_field(g, j, tau);
  chart.add_endo("PV", pv);
  chart.add_endo("PH", complement_projector_field(pv));
  chart.add_endo("S", two_eigenvalue_killing_field(g, j, tau, c));
  chart.add_two_form("phi", momentum_two_form_field(g, j, tau, c));
  chart.add_two_form("omega", kahler_form_field(g, j));
  chart.add_vector("xi", j_grad_field(g, j, tau));
  chart.add_vector("V1", grad_field(g, tau));
  chart.add_vector("V2", j_grad_field(g, j, tau));
}

}  // namespace

ChartDomain make_flat_chart(int dim, double half_width) {
  if (dim < 2 || dim % 2 != 0 || dim > kMaxDim) throw BadParameters("flat chart: bad dimension");
  ChartDomain chart(cube(dim, half_width), constant_matrix_field(identity<double>(dim)),
                    constant_matrix_field(standard_complex_structure(dim)));
  chart.add_two_form("omega",
                     kahler_form_field(chart.metric(), chart.complex_structure()));
  return chart;
}

ChartDomain make_fs_chart(int n, double scale, double half_width) {
  if (n < 1 || 2 * n > kMaxDim) throw BadParameters("fs chart: bad complex dimension");
  const int dim = 2 * n;
  MatrixField g = fs_metric_field(dim, scale);
  MatrixField j = constant_matrix_field(standard_complex_structure(dim));
  ChartDomain chart(cube(dim, half_width), g, j);
  chart.add_two_form("omega", kahler_form_field(g, j));
  chart.add_scalar("potential", fs_kahler_potential(dim, scale));
  return chart;
}

Model make_fubini_study_radial(const FsParams& params) {
  if (params.n < 2 || 2 * params.n > kMaxDim)
    throw BadParameters("fs radial model needs complex dimension 2 or 3");
  if (!(params.scale > 0.0) || !(params.half_width > 0.0))
    throw BadParameters("fs radial model: scale and half_width must be positive");

  const int dim = 2 * params.n;
  Model model;
  model.id = "cp" + std::to_string(params.n) + "-radial";
  model.family = ModelFamily::fs_radial;
  model.dim = dim;
  model.c = params.c;
  model.a = 2.0;  // Q = 4 mu (s - mu) / s along tau, so |dQ/dtau| = 4 at mu = 0
  model.has_potential = true;
  model.exclusion_radius = 0.02;
  // The radial profile written as a function of tau: a quadratic with zeros
  // at tau = c and tau = c + s and slopes +-2a.
  model.profile = quadratic_profile(2.0, params.c, params.c + params.scale);
  model.params = {{"n", double(params.n)},
                  {"scale", params.scale},
                  {"c", params.c},
                  {"half_width", params.half_width}};

  MatrixField g = fs_metric_field(dim, params.scale);
  MatrixField j = constant_matrix_field(standard_complex_structure(dim));
  model.chart = ChartDomain(cube(dim, params.half_width), g, j);
  model.chart.add_scalar("potential", fs_kahler_potential(dim, params.scale));
  register_common_fields(model, g, j, fs_radial_potential(dim, params.scale, params.c));
  model.geodesic_start = cube(dim, 0.25);

  require_kahler(model.chart, "fs radial model");
  return model;
}

Model make_product(const ProductParams& params) {
  if (params.n_factor < 1 || 2 + 2 * params.n_factor > kMaxDim)
    throw BadParameters("product model: second factor must have complex dimension 1 or 2");
  if (!(params.sigma_scale > 0.0) || !(params.factor_scale > 0.0))
    throw BadParameters("product model: scales must be positive");

  const int dim_sigma = 2;
  const int dim_n = 2 * params.n_factor;
  const int dim = dim_sigma + dim_n;

  Model model;
  model.id = "product-cp1-cp" + std::to_string(params.n_factor);
  model.family = ModelFamily::product;
  model.dim = dim;
  model.mu_constant = true;
  model.mu0 = params.mu0;
  model.params = {{"mu", params.mu0},
                  {"n_factor", double(params.n_factor)},
                  {"sigma_scale", params.sigma_scale},
                  {"factor_scale", params.factor_scale},
                  {"half_width", params.half_width}};

  const MatD j_sigma = standard_complex_structure(dim_sigma);
  const MatD j_n = standard_complex_structure(dim_n);
  const double s1 = params.sigma_scale;
  const double s2 = params.factor_scale;

  MatrixField g = make_matrix_field(
      [dim_sigma, dim_n, s1, s2, j_sigma, j_n]<class T>(const Vec<T>& x) {
        const Mat<T> g1 = fs_metric_at<T>(dim_sigma, s1, j_sigma, slice(x, 0, dim_sigma));
        const Mat<T> g2 = fs_metric_at<T>(dim_n, s2, j_n, slice(x, dim_sigma, dim_n));
        Mat<T> g_all = zero_mat<T>(dim_sigma + dim_n);
        for (int i = 0; i < dim_sigma; ++i)
          for (int j = 0; j < dim_sigma; ++j) g_all(i, j) = g1(i, j);
        for (int i = 0; i < dim_n; ++i)
          for (int j = 0; j < dim_n; ++j) g_all(dim_sigma + i, dim_sigma + j) = g2(i, j);
        return g_all;
      });
  MatrixField j = constant_matrix_field(standard_complex_structure(dim));
  model.chart = ChartDomain(cube(dim, params.half_width), g, j);

  MatD s_const = zero_mat<double>(dim);
  for (int i = dim_sigma; i < dim; ++i) s_const(i, i) = params.mu0;
  MatD pv_const = zero_mat<double>(dim);
  pv_const(0, 0) = 1.0;
  pv_const(1, 1) = 1.0;
  MatD ph_const = identity<double>(dim) - pv_const;

  model.chart.add_endo("S", constant_matrix_field(s_const));
  model.chart.add_endo("PV", constant_matrix_field(pv_const));
  model.chart.add_endo("PH", constant_matrix_field(ph_const));
  model.chart.add_scalar("mu", make_scalar_field([mu0 = params.mu0]<class T>(const Vec<T>&) {
                           return dual_const<T>(mu0);
                         }));
  model.chart.add_two_form("omega", kahler_form_field(g, j));
  VecD e0 = zero_vec<double>(dim), e1 = zero_vec<double>(dim);
  e0[0] = 1.0;
  e1[1] = 1.0;
  model.chart.add_vector("V1", constant_vector_field(e0));
  model.chart.add_vector("V2", constant_vector_field(e1));
  model.geodesic_start = cube(dim, 0.25);

  require_kahler(model.chart, "product model");
  return model;
}

// ---- Calabi local chart --------------------------------------------------------
//
// Coordinates (tau, t, b) with b a Fubini-Study base chart. With the base
// Kahler form omega_N exact on the chart, A = (1/2) d^c K_N satisfies
// dA = omega_N, eta = dt + A, and
//
//   g = (tau - c) g_N + dtau^2 / Q(tau) + Q(tau) eta^2
//   J d_tau = Q^{-1} d_t,  J d_t = -Q d_tau,  J (horizontal lift) = lift J_N
//
// which closes omega = (tau - c) omega_N + dtau ^ eta. tau is registered as
// the potential; grad tau = Q d_tau and J grad tau = d_t.

Model make_calabi_local(const CalabiParams& params) {
  if (params.base_n < 1 || 2 + 2 * params.base_n > kMaxDim)
    throw BadParameters("calabi model: base must have complex dimension 1 or 2");
  if (!(params.tau_min > params.c))
    throw BadParameters("calabi model: tau_min must exceed c so that tau - c > 0");
  if (!(params.tau_max > params.tau_min)) throw BadParameters("calabi model: empty tau range");
  if (!(params.box_shrink > 0.0) || 2.0 * params.box_shrink >= params.tau_max - params.tau_min)
    throw BadParameters("calabi model: box_shrink leaves no tau interval");

  MomentumProfile profile;
  switch (params.profile_kind) {
    case 0:
      profile = quadratic_profile(params.a, params.tau_min, params.tau_max);
      break;
    case 1:
      profile = sine_profile(params.a, params.tau_min, params.tau_max);
      break;
    default:
      throw BadParameters("calabi model: unknown profile kind");
  }
  require_valid_profile(profile);

  const int base_dim = 2 * params.base_n;
  const int dim = 2 + base_dim;
  const MatD j_base = standard_complex_structure(base_dim);
  const ScalarField k_base = fs_kahler_potential(base_dim, params.base_scale);
  const double c = params.c;
  const double base_scale = params.base_scale;

  // A_i(b) = -(1/2) K_{N,a} (J_N)^a_i, evaluated on the base slice.
  auto connection = [k_base, j_base, base_dim]<class T>(const Vec<T>& b) -> Vec<T> {
    const Vec<T> dk = coordinate_gradient(k_base, b);
    Vec<T> a = zero_vec<T>(base_dim);
    for (int i = 0; i < base_dim; ++i) {
      T s = dual_const<T>(0.0);
      for (int al = 0; al < base_dim; ++al)
        if (j_base(al, i) != 0.0) s = s + dk[al] * j_base(al, i);
      a[i] = s * (-0.5);
    }
    return a;
  };

  MatrixField g = make_matrix_field(
      [profile, connection, j_base, base_dim, base_scale, c]<class T>(const Vec<T>& x) -> Mat<T> {
        if constexpr (dual_depth_v<T> >= 4) {
          throw UnsupportedOrder("calabi metric supports three derivative orders");
        } else {
          const int dim_all = 2 + base_dim;
          const T tau = x[0];
          const Vec<T> b = slice(x, 2, base_dim);
          const T q = profile.eval(tau);
          const Vec<T> a = connection.template operator()<T>(b);
          const Mat<T> gn = fs_metric_at<T>(base_dim, base_scale, j_base, b);
          const T mu = tau - c;

          Mat<T> g_all = zero_mat<T>(dim_all);
          g_all(0, 0) = dual_const<T>(1.0) / q;
          g_all(1, 1) = q;
          for (int i = 0; i < base_dim; ++i) {
            const T qa = q * a[i];
            g_all(1, 2 + i) = qa;
            g_all(2 + i, 1) = qa;
            for (int j = 0; j < base_dim; ++j)
              g_all(2 + i, 2 + j) = gn(i, j) * mu + q * a[i] * a[j];
          }
          return g_all;
        }
      });

  MatrixField j = make_matrix_field(
      [profile, connection, j_base, base_dim]<class T>(const Vec<T>& x) -> Mat<T> {
        if constexpr (dual_depth_v<T> >= 4) {
          throw UnsupportedOrder("calabi complex structure supports three derivative orders");
        } else {
          const int dim_all = 2 + base_dim;
          const T q = profile.eval(x[0]);
          const Vec<T> b = slice(x, 2, base_dim);
          const Vec<T> a = connection.template operator()<T>(b);

          Mat<T> jm = zero_mat<T>(dim_all);
          jm(1, 0) = dual_const<T>(1.0) / q;  // J d_tau = Q^{-1} d_t
          jm(0, 1) = -q;                       // J d_t   = -Q d_tau
          for (int i = 0; i < base_dim; ++i) {
            jm(0, 2 + i) = -(q * a[i]);
            T s = dual_const<T>(0.0);
            for (int al = 0; al < base_dim; ++al)
              if (j_base(al, i) != 0.0) s = s + a[al] * j_base(al, i);
            jm(1, 2 + i) = -s;
            for (int jj = 0; jj < base_dim; ++jj)
              jm(2 + jj, 2 + i) = dual_const<T>(j_base(jj, i));
          }
          return jm;
        }
      });

  Model model;
  model.id = "calabi-dim" + std::to_string(dim);
  model.family = ModelFamily::calabi;
  model.dim = dim;
  model.c = params.c;
  model.a = params.a;
  model.has_potential = true;
  model.profile = profile;
  model.params = {{"base_n", double(params.base_n)}, {"base_scale", params.base_scale},
                  {"a", params.a},                   {"tau_min", params.tau_min},
                  {"tau_max", params.tau_max},       {"c", params.c},
                  {"profile", double(params.profile_kind)}};

  Box box;
  box.n = dim;
  box.lo[0] = params.tau_min + params.box_shrink;
  box.hi[0] = params.tau_max - params.box_shrink;
  box.lo[1] = -params.half_width;
  box.hi[1] = params.half_width;
  for (int i = 2; i < dim; ++i) {
    box.lo[i] = -params.half_width;
    box.hi[i] = params.half_width;
  }

  model.chart = ChartDomain(box, g, j);
  ScalarField tau = make_scalar_field([]<class T>(const Vec<T>& x) -> T { return x[0]; });
  register_common_fields(model, g, j, tau);
  // Q as a profile composite; register_common_fields already added the
  // derived g(grad tau, grad tau) version, which must agree. Keep both.
  model.chart.add_scalar("Q_profile", make_scalar_field([profile]<class T>(const Vec<T>& x) {
                           return profile.eval(x[0]);
                         }));

  const double mid = 0.5 * (params.tau_min + params.tau_max);
  model.geodesic_start = box;
  model.geodesic_start.lo[0] = mid - 0.05;
  model.geodesic_start.hi[0] = mid + 0.05;
  for (int i = 1; i < dim; ++i) {
    model.geodesic_start.lo[i] = -0.15;
    model.geodesic_start.hi[i] = 0.15;
  }

  require_kahler(model.chart, "calabi model");

  // Defining relations of the chart, spot-checked at construction time.
  {
    const SamplePlan plan = build_plan(model.chart.box(), 12, 99, 1e-3);
    for (const VecD& p : plan.points) {
      const double q_profile = profile.eval(p[0]);
      const double q_derived = model.chart.scalar("Q").eval(p);
      if (std::abs(q_profile - q_derived) > 1e-9 * (1.0 + std::abs(q_profile)))
        throw NotKahler("calabi model: Q(tau) does not match g(grad tau, grad tau)");
    }
  }
  return model;
}

// ---- registry -------------------------------------------------------------------

std::vector<ModelInfo> model_catalog() {
  std::vector<ModelInfo> out;
  out.push_back(
      {"cpn-radial", "fs_radial",
       "Fubini-Study chart with radial potential; instances cp2-radial, cp3-radial",
       {{"n", 2, "complex dimension (2 or 3)"},
        {"scale", 4.0, "metric scale s"},
        {"c", 0.0, "potential offset, tau(0) = c"},
        {"half_width", 0.8, "chart box half width"}}});
  out.push_back(
      {"product", "product",
       "CP^1 x CP^n_factor with constant-eigenvalue tensor; instances product-cp1-cp1, "
       "product-cp1-cp2, product-cp1-cp1-mu0",
       {{"mu", 1.0, "constant eigenvalue on the second factor"},
        {"n_factor", 1, "complex dimension of the second factor (1 or 2)"},
        {"sigma_scale", 4.0, "first factor scale"},
        {"factor_scale", 2.0, "second factor scale"},
        {"half_width", 0.8, "chart box half width"}}});
  out.push_back(
      {"calabi", "calabi",
       "warped chart (tau, t, base) over a Fubini-Study base; instances calabi-dim4, "
       "calabi-dim6",
       {{"base_n", 1, "complex dimension of the base (1 or 2)"},
        {"base_scale", 2.0, "base metric scale"},
        {"a", 1.0, "endpoint slope parameter"},
        {"tau_min", 1.0, "profile zero"},
        {"tau_max", 2.0, "profile zero"},
        {"c", 0.0, "eigenvalue offset (tau_min > c)"},
        {"profile", 0, "0 quadratic, 1 sine"},
        {"half_width", 0.7, "t and base box half width"}}});
  return out;
}

std::vector<std::string> default_instances() {
  return {"cp2-radial",      "cp3-radial",          "product-cp1-cp1", "product-cp1-cp2",
          "product-cp1-cp1-mu0", "calabi-dim4",     "calabi-dim6"};
}

std::vector<std::string> known_model_ids() {
  return {"cpn-radial",      "cp2-radial",      "cp3-radial",          "product",
          "product-cp1-cp1", "product-cp1-cp2", "product-cp1-cp1-mu0", "calabi",
          "calabi-dim4",     "calabi-dim6"};
}

namespace {

double get_or(const std::map<std::string, double>& m, const std::string& k, double dflt) {
  auto it = m.find(k);
  return it == m.end() ? dflt : it->second;
}

}  // namespace

Model build_model(const std::string& id, const std::map<std::string, double>& overrides) {
  auto fs = [&](int n) {
    FsParams p;
    p.n = static_cast<int>(get_or(overrides, "n", n));
    p.scale = get_or(overrides, "scale", 4.0);
    p.c = get_or(overrides, "c", 0.0);
    p.half_width = get_or(overrides, "half_width", 0.8);
    return make_fubini_study_radial(p);
  };
  auto product = [&](int n_factor, double mu) {
    ProductParams p;
    p.n_factor = static_cast<int>(get_or(overrides, "n_factor", n_factor));
    p.mu0 = get_or(overrides, "mu", mu);
    p.sigma_scale = get_or(overrides, "sigma_scale", 4.0);
    p.factor_scale = get_or(overrides, "factor_scale", 2.0);
    p.half_width = get_or(overrides, "half_width", 0.8);
    Model m = make_product(p);
    if (m.mu0 == 0.0) m.id += "-mu0";
    return m;
  };
  auto calabi = [&](int base_n) {
    CalabiParams p;
    p.base_n = static_cast<int>(get_or(overrides, "base_n", base_n));
    p.base_scale = get_or(overrides, "base_scale", 2.0);
    p.a = get_or(overrides, "a", 1.0);
    p.tau_min = get_or(overrides, "tau_min", 1.0);
    p.tau_max = get_or(overrides, "tau_max", 2.0);
    p.c = get_or(overrides, "c", 0.0);
    p.profile_kind = static_cast<int>(get_or(overrides, "profile", 0));
    p.half_width = get_or(overrides, "half_width", 0.7);
    return make_calabi_local(p);
  };

  if (id == "cpn-radial" || id == "cp2-radial") return fs(2);
  if (id == "cp3-radial") return fs(3);
  if (id == "product" || id == "product-cp1-cp1") return product(1, 1.0);
  if (id == "product-cp1-cp2") return product(2, 1.0);
  if (id == "product-cp1-cp1-mu0") return product(1, 0.0);
  if (id == "calabi" || id == "calabi-dim4") return calabi(1);
  if (id == "calabi-dim6") return calabi(2);
  throw BadParameters("unknown model id: " + id);
}

}  // namespace kver
