#pragma once

// Momentum profiles Q(tau): positive on (tau_min, tau_max), zero at the
// endpoints, with endpoint slopes +2a and -2a. The profile enters the
// warped-chart metric, so it must be evaluable at every dual depth.

#include <memory>
#include <string>
#include <utility>

#include "kver/dual.hpp"

namespace kver {

class ProfileImpl {
 public:
  virtual ~ProfileImpl() = default;
  virtual double eval(const double& t) const = 0;
  virtual D1 eval(const D1& t) const = 0;
  virtual D2 eval(const D2& t) const = 0;
  virtual D3 eval(const D3& t) const = 0;
  virtual D4 eval(const D4& t) const = 0;
};

namespace detail {

template <class F>
class ProfileFromFn final : public ProfileImpl {
 public:
  explicit ProfileFromFn(F f) : f_(std::move(f)) {}
  double eval(const double& t) const override { return f_(t); }
  D1 eval(const D1& t) const override { return f_(t); }
  D2 eval(const D2& t) const override { return f_(t); }
  D3 eval(const D3& t) const override { return f_(t); }
  D4 eval(const D4& t) const override { return f_(t); }

 private:
  F f_;
};

}  // namespace detail

class MomentumProfile {
 public:
  MomentumProfile() = default;
  MomentumProfile(std::shared_ptr<const ProfileImpl> impl, double a, double tau_min,
                  double tau_max, std::string name)
      : impl_(std::move(impl)),
        a_(a),
        tau_min_(tau_min),
        tau_max_(tau_max),
        name_(std::move(name)) {}

  template <class T>
  T eval(const T& t) const {
    return impl_->eval(t);
  }

  double a() const { return a_; }
  double tau_min() const { return tau_min_; }
  double tau_max() const { return tau_max_; }
  const std::string& name() const { return name_; }
  bool valid() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const ProfileImpl> impl_;
  double a_ = 0.0;
  double tau_min_ = 0.0;
  double tau_max_ = 0.0;
  std::string name_;
};

template <class F>
MomentumProfile custom_profile(F f, double a, double tau_min, double tau_max,
                               std::string name = "custom") {
  return MomentumProfile(std::make_shared<detail::ProfileFromFn<F>>(std::move(f)), a, tau_min,
                         tau_max, std::move(name));
}

// Q(t) = 2a (t - tau_min)(tau_max - t) / (tau_max - tau_min)
MomentumProfile quadratic_profile(double a, double tau_min, double tau_max);

// Q(t) = (2 a L / pi) sin(pi (t - tau_min) / L), L = tau_max - tau_min
MomentumProfile sine_profile(double a, double tau_min, double tau_max);

struct ProfileCheck {
  bool ok = true;
  std::string violation;          // first violated clause, empty when ok
  double endpoint_value_error = 0.0;  // max |Q| at the endpoints
  double slope_error = 0.0;           // max |Q' -/+ 2a| at the endpoints
  double min_interior_value = 0.0;
};

// Endpoint values within 1e-12, slopes +-2a within 1e-10, positivity on a
// 1000-point interior grid.
ProfileCheck profile_endpoint_check(const MomentumProfile& profile, int interior_samples = 1000);

// Throws ProfileInvalid with the first violated clause.
void require_valid_profile(const MomentumProfile& profile);

}  // namespace kver
