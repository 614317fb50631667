#pragma once

// Forward-mode automatic differentiation with nested dual numbers.
//
// Dual<T> carries a value and its partial derivatives with respect to up to
// kMaxDim chart coordinates, with T itself allowed to be another Dual.
// Nesting k levels yields exact mixed partial derivatives up to order k:
//
//   D1 = Dual<double>   value + gradient
//   D2 = Dual<D1>       ... + Hessian
//   D3 = Dual<D2>       ... + third-order tensor
//   D4 = Dual<D3>       one spare level so that fields derived from
//                       registered scalars still expose three orders
//
// Unused coordinate slots stay exactly zero through all arithmetic, so a
// chart of dimension below kMaxDim pays only wasted flops, never wrong
// derivatives. All elementary operations follow the usual first-order
// rules in the outermost layer; correctness at depth is by recursion.

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace kver {

inline constexpr int kMaxDim = 6;

template <class T>
struct Dual {
  using inner_type = T;
  T v{};
  std::array<T, kMaxDim> d{};
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};
template <class T>
inline constexpr int dual_depth_v = dual_depth<T>::value;

// ---- constants, variables, value extraction ------------------------------

template <class U>
U dual_const(double c) {
  if constexpr (std::is_same_v<U, double>) {
    return c;
  } else {
    U r{};
    r.v = dual_const<typename U::inner_type>(c);
    return r;
  }
}

// Seeds coordinate i as a differentiation variable at every nesting level.
template <class U>
U dual_var(double value, int i) {
  if constexpr (std::is_same_v<U, double>) {
    return value;
  } else {
    U r{};
    r.v = dual_var<typename U::inner_type>(value, i);
    r.d[static_cast<std::size_t>(i)] = dual_const<typename U::inner_type>(1.0);
    return r;
  }
}

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

// ---- arithmetic -----------------------------------------------------------

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v + b.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v - b.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <class T>
Dual<T> operator-(const Dual<T>& a) {
  Dual<T> r;
  r.v = -a.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = -a.d[i];
  return r;
}

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v * b.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.v * b.d[i] + a.d[i] * b.v;
  return r;
}

template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v / b.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
  return r;
}

// Mixed double operands, applied without promotion to keep the fast path.
template <class T>
Dual<T> operator+(const Dual<T>& a, double c) {
  Dual<T> r = a;
  r.v = a.v + c;
  return r;
}
template <class T>
Dual<T> operator+(double c, const Dual<T>& a) {
  return a + c;
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double c) {
  Dual<T> r = a;
  r.v = a.v - c;
  return r;
}
template <class T>
Dual<T> operator-(double c, const Dual<T>& a) {
  Dual<T> r = -a;
  r.v = c - a.v;
  return r;
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double c) {
  Dual<T> r;
  r.v = a.v * c;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] * c;
  return r;
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& a) {
  return a * c;
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double c) {
  return a * (1.0 / c);
}
template <class T>
Dual<T> operator/(double c, const Dual<T>& a) {
  return dual_const<Dual<T>>(c) / a;
}

template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) {
  a = a + b;
  return a;
}
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) {
  a = a - b;
  return a;
}
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) {
  a = a * b;
  return a;
}

// ---- elementary functions --------------------------------------------------

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  Dual<T> r;
  r.v = sqrt(a.v);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] / (2.0 * r.v);
  return r;
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  Dual<T> r;
  r.v = log(a.v);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] / a.v;
  return r;
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  Dual<T> r;
  r.v = exp(a.v);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] * r.v;
  return r;
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  Dual<T> r;
  r.v = sin(a.v);
  const T c = cos(a.v);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] * c;
  return r;
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  Dual<T> r;
  r.v = cos(a.v);
  const T s = sin(a.v);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = -(a.d[i] * s);
  return r;
}

// Small non-negative integer powers; enough for the chart formulas in use.
template <class S>
S pow_i(const S& a, int k) {
  S r = dual_const<S>(1.0);
  for (int j = 0; j < k; ++j) r = r * a;
  return r;
}
inline double pow_i(double a, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= a;
  return r;
}

}  // namespace kver
