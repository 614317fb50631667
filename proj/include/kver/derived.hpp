#pragma once

// Fields derived from a chart's metric, complex structure and a potential
// scalar tau. Each builder returns a new field whose evaluation at depth k
// consumes one extra dual level of tau internally, so registered closed-form
// scalars (depth 4) yield derived fields usable through depth 3.
//
// Conventions used throughout:
//   omega(X,Y) = g(JX,Y)
//   (d^c f)(X) = -df(JX)
//   (a ^ b)(X,Y) = a(X) b(Y) - a(Y) b(X)

#include "kver/chart.hpp"
#include "kver/geometry.hpp"

namespace kver {

namespace detail {

template <class T>
Vec<T> dc_covector(const Mat<T>& j, const Vec<T>& df) {
  // (d^c f)_a = -f_{,b} J^b_a
  Vec<T> out = zero_vec<T>(df.n);
  for (int a = 0; a < df.n; ++a) {
    T s = dual_const<T>(0.0);
    for (int b = 0; b < df.n; ++b) s = s + df[b] * j(b, a);
    out[a] = -s;
  }
  return out;
}

}  // namespace detail

// gradient of f: g^{-1} df
inline VectorField grad_field(MatrixField g, ScalarField f) {
  return make_vector_field([g = std::move(g), f = std::move(f)]<class T>(const Vec<T>& x) {
    const Vec<T> df = coordinate_gradient(f, x);
    return matvec(inverse(g.eval(x)), df);
  });
}

// Q = g(grad f, grad f)
inline ScalarField grad_norm2_field(MatrixField g, ScalarField f) {
  return make_scalar_field([g = std::move(g), f = std::move(f)]<class T>(const Vec<T>& x) -> T {
    if constexpr (dual_depth_v<T> >= 4) {
      throw UnsupportedOrder("derived scalar supports three derivative orders");
    } else {
      const Vec<T> df = coordinate_gradient(f, x);
      const Vec<T> gt = matvec(inverse(g.eval(x)), df);
      T q = dual_const<T>(0.0);
      for (int i = 0; i < x.n; ++i) q = q + gt[i] * df[i];
      return q;
    }
  });
}

// xi = J grad f
inline VectorField j_grad_field(MatrixField g, MatrixField j, ScalarField f) {
  return make_vector_field(
      [g = std::move(g), j = std::move(j), f = std::move(f)]<class T>(const Vec<T>& x) {
        const Vec<T> df = coordinate_gradient(f, x);
        return matvec(j.eval(x), matvec(inverse(g.eval(x)), df));
      });
}

// Orthogonal projector onto span{grad tau, J grad tau}.
inline MatrixField vertical_projector_field(MatrixField g, MatrixField j, ScalarField tau) {
  return make_matrix_field(
      [g = std::move(g), j = std::move(j), tau = std::move(tau)]<class T>(const Vec<T>& x) {
        const Mat<T> gx = g.eval(x);
        const Mat<T> jx = j.eval(x);
        const Vec<T> dt = coordinate_gradient(tau, x);
        const Vec<T> v1 = matvec(inverse(gx), dt);  // grad tau
        const Vec<T> v2 = matvec(jx, v1);           // J grad tau
        const Vec<T> v2_flat = matvec(gx, v2);
        T q = dual_const<T>(0.0);
        for (int i = 0; i < x.n; ++i) q = q + v1[i] * dt[i];
        const Mat<T> pv = outer(v1, dt) + outer(v2, v2_flat);
        return pv * (dual_const<T>(1.0) / q);
      });
}

inline MatrixField complement_projector_field(MatrixField p) {
  return make_matrix_field([p = std::move(p)]<class T>(const Vec<T>& x) {
    return identity<T>(x.n) - p.eval(x);
  });
}

// S = (tau - c) * (I - P_V): zero on the vertical plane, tau - c on its
// orthogonal complement.
inline MatrixField two_eigenvalue_killing_field(MatrixField g, MatrixField j, ScalarField tau,
                                                double c) {
  MatrixField pv = vertical_projector_field(std::move(g), std::move(j), tau);
  return make_matrix_field([pv = std::move(pv), tau, c]<class T>(const Vec<T>& x) {
    const T mu = tau.eval(x) - c;
    return (identity<T>(x.n) - pv.eval(x)) * mu;
  });
}

// phi = (tau - c) dtau ^ d^c tau / Q, stored with lower indices.
inline MatrixField momentum_two_form_field(MatrixField g, MatrixField j, ScalarField tau,
                                           double c) {
  return make_matrix_field(
      [g = std::move(g), j = std::move(j), tau, c]<class T>(const Vec<T>& x) {
        const Mat<T> gx = g.eval(x);
        const Mat<T> jx = j.eval(x);
        const Vec<T> dt = coordinate_gradient(tau, x);
        const Vec<T> dct = detail::dc_covector(jx, dt);
        const Vec<T> gt = matvec(inverse(gx), dt);
        T q = dual_const<T>(0.0);
        for (int i = 0; i < x.n; ++i) q = q + gt[i] * dt[i];
        const T mu = tau.eval(x) - c;
        return (outer(dt, dct) - outer(dct, dt)) * (mu / q);
      });
}

// Kahler form omega_{ab} = g(J e_a, e_b) = J^c_a g_{cb}.
inline MatrixField kahler_form_field(MatrixField g, MatrixField j) {
  return make_matrix_field([g = std::move(g), j = std::move(j)]<class T>(const Vec<T>& x) {
    return matmul(transpose(j.eval(x)), g.eval(x));
  });
}

// Metric induced by a potential under a point-independent complex structure:
// the J-invariant average (H + J^T H J)/2 of the coordinate Hessian of k.
// Costs two dual levels of k, so it supports depth 2; enough for curvature.
inline MatrixField potential_metric_field(ScalarField k, MatD j_const) {
  return make_matrix_field([k = std::move(k), j_const]<class T>(const Vec<T>& x) -> Mat<T> {
    if constexpr (dual_depth_v<T> >= 3) {
      throw UnsupportedOrder("potential metric supports two derivative orders");
    } else {
      const Vec<Dual<Dual<T>>> xx = seed_over(seed_over(x));
      const Dual<Dual<T>> r = k.eval(xx);
      const int n = x.n;
      Mat<T> h = zero_mat<T>(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          h(i, j) = r.d[static_cast<std::size_t>(i)].d[static_cast<std::size_t>(j)];
      Mat<T> jh = zero_mat<T>(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          T s = dual_const<T>(0.0);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s = s + h(a, b) * (j_const(a, i) * j_const(b, j));
          jh(i, j) = s;
        }
      return (h + jh) * 0.5;
    }
  });
}

}  // namespace kver
