#include "kver/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace kver {

double dot(const VecD& a, const VecD& b) {
  double s = 0.0;
  for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
  return s;
}

double norm2(const VecD& a) { return std::sqrt(dot(a, a)); }

double max_abs(const VecD& a) {
  double m = 0.0;
  for (int i = 0; i < a.n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

double max_abs(const MatD& a) {
  double m = 0.0;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double determinant(MatD a) {
  const int n = a.n;
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(a(c, c));
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > best) {
        best = std::abs(a(r, c));
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

SymEigen sym_eigen(const MatD& input) {
  const int n = input.n;
  MatD a = input;
  MatD v = identity<double>(n);

  // Classical cyclic Jacobi sweeps. Deterministic rotation order keeps the
  // decomposition reproducible across platforms.
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Sort ascending, then fix each eigenvector sign.
  std::array<int, kMaxDim> order{};
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.begin() + n,
            [&](int x, int y) { return a(x, x) < a(y, y); });

  SymEigen out;
  out.values = zero_vec<double>(n);
  out.vectors = zero_mat<double>(n);
  for (int c = 0; c < n; ++c) {
    const int src = order[c];
    out.values[c] = a(src, src);
    int arg = 0;
    double best = -1.0;
    for (int r = 0; r < n; ++r) {
      out.vectors(r, c) = v(r, src);
      if (std::abs(v(r, src)) > best + 1e-15) {
        best = std::abs(v(r, src));
        arg = r;
      }
    }
    if (out.vectors(arg, c) < 0.0)
      for (int r = 0; r < n; ++r) out.vectors(r, c) = -out.vectors(r, c);
  }
  return out;
}

static MatD apply_spectral(const MatD& a, double (*fn)(double)) {
  const SymEigen eig = sym_eigen(a);
  MatD r = zero_mat<double>(a.n);
  for (int k = 0; k < a.n; ++k) {
    const double f = fn(eig.values[k]);
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.n; ++j) r(i, j) += f * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return r;
}

MatD sym_sqrt(const MatD& a) {
  return apply_spectral(a, +[](double x) { return std::sqrt(x); });
}

MatD sym_inv_sqrt(const MatD& a) {
  return apply_spectral(a, +[](double x) { return 1.0 / std::sqrt(x); });
}

double min_eigenvalue(const MatD& a) {
  const SymEigen eig = sym_eigen(a);
  return eig.values[0];
}

}  // namespace kver
