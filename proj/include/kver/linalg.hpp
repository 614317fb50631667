#pragma once

// Fixed-capacity dense vectors and square matrices over an AD-capable
// scalar. Dimensions are runtime values bounded by kMaxDim; storage is
// stack-only so chart evaluations never allocate.

#include <array>
#include <cmath>

#include "kver/dual.hpp"
#include "kver/errors.hpp"

namespace kver {

template <class T>
struct Vec {
  int n = 0;
  std::array<T, kMaxDim> e{};

  T& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
  const T& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
};

template <class T>
struct Mat {
  int n = 0;
  std::array<T, kMaxDim * kMaxDim> e{};

  T& operator()(int i, int j) { return e[static_cast<std::size_t>(i * kMaxDim + j)]; }
  const T& operator()(int i, int j) const {
    return e[static_cast<std::size_t>(i * kMaxDim + j)];
  }
};

using VecD = Vec<double>;
using MatD = Mat<double>;

template <class T>
Vec<T> zero_vec(int n) {
  Vec<T> v;
  v.n = n;
  for (int i = 0; i < n; ++i) v[i] = dual_const<T>(0.0);
  return v;
}

template <class T>
Mat<T> zero_mat(int n) {
  Mat<T> m;
  m.n = n;
  return m;
}

template <class T>
Mat<T> identity(int n) {
  Mat<T> m;
  m.n = n;
  for (int i = 0; i < n; ++i) m(i, i) = dual_const<T>(1.0);
  return m;
}

template <class T>
Vec<T> operator+(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r = a;
  for (int i = 0; i < a.n; ++i) r[i] = a[i] + b[i];
  return r;
}

template <class T>
Vec<T> operator-(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r = a;
  for (int i = 0; i < a.n; ++i) r[i] = a[i] - b[i];
  return r;
}

template <class T, class S>
Vec<T> operator*(const Vec<T>& a, const S& c) {
  Vec<T> r = a;
  for (int i = 0; i < a.n; ++i) r[i] = a[i] * c;
  return r;
}

template <class T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r = a;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

template <class T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r = a;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

template <class T, class S>
Mat<T> operator*(const Mat<T>& a, const S& c) {
  Mat<T> r = a;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r(i, j) = a(i, j) * c;
  return r;
}

template <class T>
Vec<T> matvec(const Mat<T>& m, const Vec<T>& x) {
  Vec<T> r = zero_vec<T>(m.n);
  for (int i = 0; i < m.n; ++i) {
    T s = dual_const<T>(0.0);
    for (int j = 0; j < m.n; ++j) s = s + m(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

template <class T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r = zero_mat<T>(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int k = 0; k < a.n; ++k) {
      const T& aik = a(i, k);
      for (int j = 0; j < a.n; ++j) r(i, j) = r(i, j) + aik * b(k, j);
    }
  return r;
}

template <class T>
Mat<T> transpose(const Mat<T>& a) {
  Mat<T> r = zero_mat<T>(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r(i, j) = a(j, i);
  return r;
}

// u v^T
template <class T>
Mat<T> outer(const Vec<T>& u, const Vec<T>& v) {
  Mat<T> r = zero_mat<T>(u.n);
  for (int i = 0; i < u.n; ++i)
    for (int j = 0; j < u.n; ++j) r(i, j) = u[i] * v[j];
  return r;
}

template <class T>
T trace(const Mat<T>& a) {
  T s = dual_const<T>(0.0);
  for (int i = 0; i < a.n; ++i) s = s + a(i, i);
  return s;
}

// Bilinear pairing x^T M y.
template <class T>
T pair(const Mat<T>& m, const Vec<T>& x, const Vec<T>& y) {
  T s = dual_const<T>(0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) s = s + x[i] * m(i, j) * y[j];
  return s;
}

// Gauss-Jordan inverse with partial pivoting on value magnitude. Works for
// any dual depth; throws SingularMetric when a pivot collapses.
template <class T>
Mat<T> inverse(Mat<T> a) {
  const int n = a.n;
  Mat<T> inv = identity<T>(n);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(value_of(a(c, c)));
    for (int r = c + 1; r < n; ++r) {
      const double m = std::abs(value_of(a(r, c)));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best < 1e-300) throw SingularMetric("matrix inverse: zero pivot");
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(c, j), a(piv, j));
        std::swap(inv(c, j), inv(piv, j));
      }
    }
    const T p = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) = a(c, j) / p;
      inv(c, j) = inv(c, j) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const T f = a(r, c);
      if constexpr (std::is_same_v<T, double>) {
        if (f == 0.0) continue;
      }
      for (int j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

// ---- double-only helpers ----------------------------------------------------

double dot(const VecD& a, const VecD& b);
double norm2(const VecD& a);
double max_abs(const VecD& a);
double max_abs(const MatD& a);
double determinant(MatD a);

// Jacobi eigendecomposition of a symmetric matrix. Eigenvalues ascending;
// eigenvectors are the columns of `vectors`, each with a deterministic sign
// (largest-magnitude entry positive, first such entry on ties).
struct SymEigen {
  VecD values;
  MatD vectors;
};
SymEigen sym_eigen(const MatD& a);

// Symmetric square root and inverse square root of a positive matrix.
MatD sym_sqrt(const MatD& a);
MatD sym_inv_sqrt(const MatD& a);

double min_eigenvalue(const MatD& a);

}  // namespace kver
