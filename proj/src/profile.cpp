#include "kver/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kver/errors.hpp"

namespace kver {

MomentumProfile quadratic_profile(double a, double tau_min, double tau_max) {
  if (!(a > 0.0) || !(tau_max > tau_min))
    throw BadParameters("quadratic profile needs a > 0 and tau_max > tau_min");
  const double width = tau_max - tau_min;
  return custom_profile(
      [a, tau_min, tau_max, width](const auto& t) {
        return 2.0 * a * (t - tau_min) * (tau_max - t) * (1.0 / width);
      },
      a, tau_min, tau_max, "quadratic");
}

MomentumProfile sine_profile(double a, double tau_min, double tau_max) {
  if (!(a > 0.0) || !(tau_max > tau_min))
    throw BadParameters("sine profile needs a > 0 and tau_max > tau_min");
  const double width = tau_max - tau_min;
  const double pi = 3.14159265358979323846;
  return custom_profile(
      [a, tau_min, width, pi](const auto& t) {
        using std::sin;
        return sin((t - tau_min) * (pi / width)) * (2.0 * a * width / pi);
      },
      a, tau_min, tau_max, "sine");
}

ProfileCheck profile_endpoint_check(const MomentumProfile& profile, int interior_samples) {
  ProfileCheck out;
  const double a = profile.a();
  const double lo = profile.tau_min();
  const double hi = profile.tau_max();

  const double q_lo = profile.eval(lo);
  const double q_hi = profile.eval(hi);
  out.endpoint_value_error = std::max(std::abs(q_lo), std::abs(q_hi));
  if (out.endpoint_value_error > 1e-12) {
    out.ok = false;
    out.violation = "Q does not vanish at the endpoints";
  }

  const D1 slope_lo = profile.eval(dual_var<D1>(lo, 0));
  const D1 slope_hi = profile.eval(dual_var<D1>(hi, 0));
  out.slope_error = std::max(std::abs(slope_lo.d[0] - 2.0 * a), std::abs(slope_hi.d[0] + 2.0 * a));
  if (out.ok && out.slope_error > 1e-10) {
    out.ok = false;
    out.violation = "endpoint slopes are not +2a / -2a";
  }

  out.min_interior_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < interior_samples; ++k) {
    const double t = lo + (hi - lo) * (k + 0.5) / interior_samples;
    out.min_interior_value = std::min(out.min_interior_value, profile.eval(t));
  }
  if (out.ok && !(out.min_interior_value > 0.0)) {
    out.ok = false;
    out.violation = "Q is not positive on the open interval";
  }
  return out;
}

void require_valid_profile(const MomentumProfile& profile) {
  const ProfileCheck check = profile_endpoint_check(profile);
  if (!check.ok) throw ProfileInvalid("momentum profile: " + check.violation);
}

}  // namespace kver
