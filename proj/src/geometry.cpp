#include "kver/geometry.hpp"

#include <cmath>

#include "kver/errors.hpp"

namespace kver {

MatD metric_at(const ChartDomain& chart, const VecD& p, bool check_pd) {
  const MatD g = chart.metric().eval(p);
  if (check_pd && min_eigenvalue(g) < kPdThreshold)
    throw SingularMetric("metric not positive definite at sample point");
  return g;
}

PointFrame point_frame(const ChartDomain& chart, const VecD& p, bool check_pd) {
  PointFrame fr;
  fr.p = p;
  fr.g = metric_at(chart, p, check_pd);
  fr.ginv = inverse(fr.g);
  fr.J = chart.complex_structure().eval(p);
  fr.gamma = christoffel_depth<double>(chart, p);
  return fr;
}

double g_inner(const MatD& g, const VecD& x, const VecD& y) { return pair(g, x, y); }

VecD g_normalize(const MatD& g, VecD x) {
  const double n2 = g_inner(g, x, x);
  if (n2 <= 0.0) throw SingularMetric("cannot normalize a vector of nonpositive length");
  const double inv = 1.0 / std::sqrt(n2);
  for (int i = 0; i < x.n; ++i) x[i] *= inv;
  return x;
}

VecD lower_vec(const MatD& g, const VecD& x) { return matvec(g, x); }

MatD lower_endo(const MatD& g, const MatD& s) { return matmul(g, s); }

GammaD christoffel(const ChartDomain& chart, const VecD& p) {
  (void)metric_at(chart, p);  // positive-definiteness gate
  return christoffel_depth<double>(chart, p);
}

VecD grad_scalar(const ChartDomain& chart, const ScalarField& f, const VecD& p) {
  const MatD g = metric_at(chart, p);
  const VecD df = coordinate_gradient(f, p);
  return matvec(inverse(g), df);
}

MatD hessian_scalar(const ChartDomain& chart, const ScalarField& f, const VecD& p) {
  const Vec<D2> x = seed_point<D2>(p);
  const D2 fx = f.eval(x);
  const GammaD gamma = christoffel(chart, p);
  const int n = p.n;

  MatD h = zero_mat<double>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = value_of(fx.d[i].d[j]);
      for (int k = 0; k < n; ++k) v -= gamma.at(k, i, j) * value_of(fx.d[k]);
      h(i, j) = v;
    }
  return h;
}

VecD cov_deriv_vector(const PointFrame& fr, const Vec<D1>& vjet, const VecD& x) {
  const int n = fr.p.n;
  VecD out = zero_vec<double>(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      s += x[k] * vjet[i].d[k];
      for (int m = 0; m < n; ++m) s += x[k] * fr.gamma.at(i, k, m) * value_of(vjet[m]);
    }
    out[i] = s;
  }
  return out;
}

VecD cov_deriv_vector(const ChartDomain& chart, const VectorField& v, const VecD& x,
                      const VecD& p) {
  const PointFrame fr = point_frame(chart, p);
  return cov_deriv_vector(fr, v.eval(seed_point<D1>(p)), x);
}

MatD cov_deriv_endo(const PointFrame& fr, const Mat<D1>& sjet, const VecD& x) {
  const int n = fr.p.n;
  MatD out = zero_mat<double>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += x[k] * sjet(i, j).d[k];
        for (int m = 0; m < n; ++m) {
          s += x[k] * fr.gamma.at(i, k, m) * value_of(sjet(m, j));
          s -= x[k] * fr.gamma.at(m, k, j) * value_of(sjet(i, m));
        }
      }
      out(i, j) = s;
    }
  return out;
}

MatD cov_deriv_endo(const ChartDomain& chart, const MatrixField& s, const VecD& x,
                    const VecD& p) {
  const PointFrame fr = point_frame(chart, p);
  return cov_deriv_endo(fr, s.eval(seed_point<D1>(p)), x);
}

MatD cov_deriv_two_form(const PointFrame& fr, const Mat<D1>& pjet, const VecD& x) {
  const int n = fr.p.n;
  MatD out = zero_mat<double>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += x[k] * pjet(i, j).d[k];
        for (int m = 0; m < n; ++m) {
          s -= x[k] * fr.gamma.at(m, k, i) * value_of(pjet(m, j));
          s -= x[k] * fr.gamma.at(m, k, j) * value_of(pjet(i, m));
        }
      }
      out(i, j) = s;
    }
  return out;
}

MatD cov_deriv_two_form(const ChartDomain& chart, const MatrixField& phi, const VecD& x,
                        const VecD& p) {
  const PointFrame fr = point_frame(chart, p);
  return cov_deriv_two_form(fr, phi.eval(seed_point<D1>(p)), x);
}

MatD ricci(const ChartDomain& chart, const VecD& p) {
  (void)metric_at(chart, p);
  const GammaJet gamma = christoffel_depth<D1>(chart, p);
  const int n = p.n;

  MatD ric = zero_mat<double>(n);
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v) {
      double r = 0.0;
      for (int m = 0; m < n; ++m) {
        r += gamma.at(m, v, s).d[m];   // d_m Gamma^m_{vs}
        r -= gamma.at(m, m, s).d[v];   // d_v Gamma^m_{ms}
        for (int l = 0; l < n; ++l) {
          r += value_of(gamma.at(m, m, l)) * value_of(gamma.at(l, v, s));
          r -= value_of(gamma.at(m, v, l)) * value_of(gamma.at(l, m, s));
        }
      }
      ric(s, v) = r;
    }
  return ric;
}

VecD lie_bracket(const ChartDomain& chart, const VectorField& x, const VectorField& y,
                 const VecD& p) {
  (void)chart;  // brackets are metric-free; parameter kept for API symmetry
  const Vec<D1> q = seed_point<D1>(p);
  const Vec<D1> xj = x.eval(q);
  const Vec<D1> yj = y.eval(q);
  const int n = p.n;
  VecD out = zero_vec<double>(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += value_of(xj[i]) * yj[k].d[i] - value_of(yj[i]) * xj[k].d[i];
    out[k] = s;
  }
  return out;
}

// ---- geodesics ---------------------------------------------------------------

namespace {

// Acceleration a^k = -Gamma^k_{ij} v^i v^j; pivot failures inside the metric
// inverse surface as SingularMetric.
VecD geo_accel(const ChartDomain& chart, const VecD& x, const VecD& v) {
  const GammaD gamma = christoffel_depth<double>(chart, x);
  const int n = x.n;
  VecD a = zero_vec<double>(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += gamma.at(k, i, j) * v[i] * v[j];
    a[k] = -s;
  }
  return a;
}

}  // namespace

GeodesicResult integrate_geodesic(const ChartDomain& chart, const VecD& p0, const VecD& v0,
                                  double t_end, int steps) {
  if (!chart.interior(p0)) throw BadParameters("geodesic start point outside chart box");

  GeodesicResult res;
  res.states.reserve(static_cast<std::size_t>(steps) + 1);
  res.states.push_back({0.0, p0, v0});

  const double dt = t_end / steps;
  VecD x = p0, v = v0;
  for (int s = 0; s < steps; ++s) {
    const VecD k1x = v;
    const VecD k1v = geo_accel(chart, x, v);

    VecD x2 = x + k1x * (dt / 2.0);
    VecD v2 = v + k1v * (dt / 2.0);
    if (!chart.interior(x2)) {
      res.truncated = true;
      break;
    }
    const VecD k2x = v2;
    const VecD k2v = geo_accel(chart, x2, v2);

    VecD x3 = x + k2x * (dt / 2.0);
    VecD v3 = v + k2v * (dt / 2.0);
    if (!chart.interior(x3)) {
      res.truncated = true;
      break;
    }
    const VecD k3x = v3;
    const VecD k3v = geo_accel(chart, x3, v3);

    VecD x4 = x + k3x * dt;
    VecD v4 = v + k3v * dt;
    if (!chart.interior(x4)) {
      res.truncated = true;
      break;
    }
    const VecD k4x = v4;
    const VecD k4v = geo_accel(chart, x4, v4);

    x = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (dt / 6.0);
    v = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0);
    if (!chart.interior(x)) {
      res.truncated = true;
      break;
    }
    res.states.push_back({dt * (s + 1), x, v});
  }
  return res;
}

// ---- finite-difference oracle ------------------------------------------------

namespace {

MatD fd_partial_contraction(const MatrixField& field, const VecD& x, const VecD& p,
                            double h) {
  const int n = p.n;
  MatD acc = zero_mat<double>(n);
  for (int k = 0; k < n; ++k) {
    VecD pp = p, pm = p;
    pp[k] += h;
    pm[k] -= h;
    const MatD fp = field.eval(pp);
    const MatD fm = field.eval(pm);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc(i, j) += x[k] * (fp(i, j) - fm(i, j)) / (2.0 * h);
  }
  return acc;
}

}  // namespace

MatD fd_cov_deriv(const ChartDomain& chart, const MatrixField& field, TensorKind kind,
                  const VecD& x, const VecD& p, double h, bool check_convergence) {
  if (h < 1e-6 || h > 1e-3) throw BadParameters("fd step must lie in [1e-6, 1e-3]");
  if (!chart.interior(p, 2.0 * h))
    throw BadParameters("fd oracle point too close to the chart boundary");

  const MatD partial = fd_partial_contraction(field, x, p, h);

  if (check_convergence) {
    const MatD p2 = fd_partial_contraction(field, x, p, h / 2.0);
    const MatD p4 = fd_partial_contraction(field, x, p, h / 4.0);
    const double d1 = max_abs(partial - p2);
    const double d2 = max_abs(p2 - p4);
    // Quadratic convergence makes successive difference norms shrink ~4x.
    if (d1 > 1e-13 && d2 > 1e-15) {
      const double slope = std::log2(d1 / d2);
      if (std::abs(slope - 2.0) > 0.8)
        throw StepTooLarge("fd oracle: Richardson ratio is not quadratic");
    }
  }

  const PointFrame fr = point_frame(chart, p);
  const MatD f0 = field.eval(p);
  const int n = p.n;
  MatD out = partial;
  if (kind == TensorKind::endo) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double corr = 0.0;
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m)
            corr += x[k] * (fr.gamma.at(i, k, m) * f0(m, j) - fr.gamma.at(m, k, j) * f0(i, m));
        out(i, j) += corr;
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double corr = 0.0;
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m)
            corr -= x[k] * (fr.gamma.at(m, k, i) * f0(m, j) + fr.gamma.at(m, k, j) * f0(i, m));
        out(i, j) += corr;
      }
  }
  return out;
}

double fd_ad_gap(const ChartDomain& chart, const MatrixField& field, TensorKind kind,
                 const VecD& x, const VecD& p, double h) {
  const MatD fd = fd_cov_deriv(chart, field, kind, x, p, h);
  const MatD ad = kind == TensorKind::endo ? cov_deriv_endo(chart, field, x, p)
                                           : cov_deriv_two_form(chart, field, x, p);
  return max_abs(fd - ad);
}

}  // namespace kver
