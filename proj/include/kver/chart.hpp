#pragma once

// ChartDomain: a coordinate box carrying a metric, a complex structure and
// named tensor fields. Fields are registered once from generic lambdas and
// are then evaluable at several AD depths through a small virtual interface:
// scalars up to D4, matrix and vector fields up to D3. The extra scalar level
// exists so that fields *derived* from a registered scalar (which consume one
// differentiation level internally) still provide three orders themselves.

#include <map>
#include <memory>
#include <string>
#include <utility>

#include "kver/errors.hpp"
#include "kver/linalg.hpp"

namespace kver {

struct Box {
  int n = 0;
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};

  bool contains(const VecD& p, double margin = 0.0) const {
    if (p.n != n) return false;
    for (int i = 0; i < n; ++i)
      if (p[i] < lo[i] + margin || p[i] > hi[i] - margin) return false;
    return true;
  }
};

// Seeds every coordinate of p as an AD variable at depth U.
template <class U>
Vec<U> seed_point(const VecD& p) {
  Vec<U> x;
  x.n = p.n;
  for (int i = 0; i < p.n; ++i) x[i] = dual_var<U>(p[i], i);
  return x;
}

// Adds one derivative layer on top of an already (possibly) seeded point.
// The new outer slots differentiate with respect to the chart coordinates
// while the inner structure of each component is preserved, so evaluating a
// field at the result yields its coordinate partials as depth-T values.
template <class T>
Vec<Dual<T>> seed_over(const Vec<T>& x) {
  Vec<Dual<T>> xx;
  xx.n = x.n;
  for (int i = 0; i < x.n; ++i) {
    xx[i].v = x[i];
    xx[i].d[static_cast<std::size_t>(i)] = dual_const<T>(1.0);
  }
  return xx;
}

// ---- field interfaces -------------------------------------------------------

class ScalarFieldImpl {
 public:
  virtual ~ScalarFieldImpl() = default;
  virtual double eval(const Vec<double>& x) const = 0;
  virtual D1 eval(const Vec<D1>& x) const = 0;
  virtual D2 eval(const Vec<D2>& x) const = 0;
  virtual D3 eval(const Vec<D3>& x) const = 0;
  virtual D4 eval(const Vec<D4>& x) const = 0;
};

class MatrixFieldImpl {
 public:
  virtual ~MatrixFieldImpl() = default;
  virtual Mat<double> eval(const Vec<double>& x) const = 0;
  virtual Mat<D1> eval(const Vec<D1>& x) const = 0;
  virtual Mat<D2> eval(const Vec<D2>& x) const = 0;
  virtual Mat<D3> eval(const Vec<D3>& x) const = 0;
};

class VectorFieldImpl {
 public:
  virtual ~VectorFieldImpl() = default;
  virtual Vec<double> eval(const Vec<double>& x) const = 0;
  virtual Vec<D1> eval(const Vec<D1>& x) const = 0;
  virtual Vec<D2> eval(const Vec<D2>& x) const = 0;
  virtual Vec<D3> eval(const Vec<D3>& x) const = 0;
};

namespace detail {

template <class F>
class ScalarFromFn final : public ScalarFieldImpl {
 public:
  explicit ScalarFromFn(F f) : f_(std::move(f)) {}
  double eval(const Vec<double>& x) const override { return f_(x); }
  D1 eval(const Vec<D1>& x) const override { return f_(x); }
  D2 eval(const Vec<D2>& x) const override { return f_(x); }
  D3 eval(const Vec<D3>& x) const override { return f_(x); }
  D4 eval(const Vec<D4>& x) const override { return f_(x); }

 private:
  F f_;
};

template <class F>
class MatrixFromFn final : public MatrixFieldImpl {
 public:
  explicit MatrixFromFn(F f) : f_(std::move(f)) {}
  Mat<double> eval(const Vec<double>& x) const override { return f_(x); }
  Mat<D1> eval(const Vec<D1>& x) const override { return f_(x); }
  Mat<D2> eval(const Vec<D2>& x) const override { return f_(x); }
  Mat<D3> eval(const Vec<D3>& x) const override { return f_(x); }

 private:
  F f_;
};

template <class F>
class VectorFromFn final : public VectorFieldImpl {
 public:
  explicit VectorFromFn(F f) : f_(std::move(f)) {}
  Vec<double> eval(const Vec<double>& x) const override { return f_(x); }
  Vec<D1> eval(const Vec<D1>& x) const override { return f_(x); }
  Vec<D2> eval(const Vec<D2>& x) const override { return f_(x); }
  Vec<D3> eval(const Vec<D3>& x) const override { return f_(x); }

 private:
  F f_;
};

}  // namespace detail

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const ScalarFieldImpl> impl) : impl_(std::move(impl)) {}
  template <class T>
  T eval(const Vec<T>& x) const {
    return impl_->eval(x);
  }
  bool valid() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const ScalarFieldImpl> impl_;
};

class MatrixField {
 public:
  MatrixField() = default;
  explicit MatrixField(std::shared_ptr<const MatrixFieldImpl> impl) : impl_(std::move(impl)) {}
  template <class T>
  Mat<T> eval(const Vec<T>& x) const {
    return impl_->eval(x);
  }
  bool valid() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const MatrixFieldImpl> impl_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::shared_ptr<const VectorFieldImpl> impl) : impl_(std::move(impl)) {}
  template <class T>
  Vec<T> eval(const Vec<T>& x) const {
    return impl_->eval(x);
  }
  bool valid() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const VectorFieldImpl> impl_;
};

template <class F>
ScalarField make_scalar_field(F f) {
  return ScalarField(std::make_shared<detail::ScalarFromFn<F>>(std::move(f)));
}

template <class F>
MatrixField make_matrix_field(F f) {
  return MatrixField(std::make_shared<detail::MatrixFromFn<F>>(std::move(f)));
}

template <class F>
VectorField make_vector_field(F f) {
  return VectorField(std::make_shared<detail::VectorFromFn<F>>(std::move(f)));
}

// Coordinate partials of a scalar field at p, carried at the depth of p
// itself. Costs one extra differentiation level on the underlying field.
template <class T>
Vec<T> coordinate_gradient(const ScalarField& f, const Vec<T>& p) {
  const Vec<Dual<T>> xx = seed_over(p);
  const Dual<T> r = f.eval(xx);
  Vec<T> g;
  g.n = p.n;
  for (int i = 0; i < p.n; ++i) g[i] = r.d[static_cast<std::size_t>(i)];
  return g;
}

// ---- chart ------------------------------------------------------------------

class ChartDomain {
 public:
  ChartDomain() = default;
  ChartDomain(Box box, MatrixField metric, MatrixField complex_structure)
      : box_(box), metric_(std::move(metric)), complex_(std::move(complex_structure)) {
    if (box_.n < 2 || box_.n % 2 != 0)
      throw BadParameters("chart dimension must be even and at least 2");
  }

  int dim() const { return box_.n; }
  const Box& box() const { return box_; }
  const MatrixField& metric() const { return metric_; }
  const MatrixField& complex_structure() const { return complex_; }

  void add_scalar(const std::string& name, ScalarField f) { scalars_[name] = std::move(f); }
  void add_endo(const std::string& name, MatrixField f) { endos_[name] = std::move(f); }
  void add_two_form(const std::string& name, MatrixField f) { two_forms_[name] = std::move(f); }
  void add_vector(const std::string& name, VectorField f) { vectors_[name] = std::move(f); }

  const ScalarField& scalar(const std::string& name) const { return find(scalars_, name); }
  const MatrixField& endo(const std::string& name) const { return find(endos_, name); }
  const MatrixField& two_form(const std::string& name) const { return find(two_forms_, name); }
  const VectorField& vector(const std::string& name) const { return find(vectors_, name); }

  bool has_scalar(const std::string& name) const { return scalars_.count(name) != 0; }
  bool has_endo(const std::string& name) const { return endos_.count(name) != 0; }
  bool has_two_form(const std::string& name) const { return two_forms_.count(name) != 0; }
  bool has_vector(const std::string& name) const { return vectors_.count(name) != 0; }

  bool interior(const VecD& p, double margin = 0.0) const { return box_.contains(p, margin); }

 private:
  template <class M>
  static const typename M::mapped_type& find(const M& m, const std::string& name) {
    auto it = m.find(name);
    if (it == m.end()) throw BadParameters("unknown field: " + name);
    return it->second;
  }

  Box box_;
  MatrixField metric_;
  MatrixField complex_;
  std::map<std::string, ScalarField> scalars_;
  std::map<std::string, MatrixField> endos_;
  std::map<std::string, MatrixField> two_forms_;
  std::map<std::string, VectorField> vectors_;
};

}  // namespace kver
