#include "growthlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

Potential Potential::power_even(int k) {
  if (k < 2 || k % 2 != 0) fail(ErrorCode::InvalidArgument, "power potential needs an even k >= 2");
  Potential v;
  v.kind_ = Kind::PowerEven;
  v.k_ = k;
  v.name_ = "power(k=" + std::to_string(k) + ")";
  return v;
}

Potential Potential::fractional_power(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidArgument, "fractional potential needs 0 < delta < 1");
  Potential v;
  v.kind_ = Kind::FractionalPower;
  v.delta_ = delta;
  v.name_ = "fractional(delta=" + short_number(delta) + ")";
  return v;
}

Potential Potential::absolute_value() {
  Potential v;
  v.kind_ = Kind::AbsoluteValue;
  v.name_ = "abs";
  return v;
}

Potential Potential::flat_well(double a) {
  if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "flat-well potential needs a > 0");
  Potential v;
  v.kind_ = Kind::FlatWell;
  v.a_ = a;
  v.name_ = "flatwell(a=" + short_number(a) + ")";
  return v;
}

Potential Potential::custom(std::string name, std::function<double(double)> value,
                            std::function<double(double)> right_derivative) {
  if (!value || !right_derivative) fail(ErrorCode::InvalidArgument, "custom potential needs V and its right derivative");
  Potential v;
  v.kind_ = Kind::CustomConvex;
  v.name_ = std::move(name);
  v.custom_value_ = std::move(value);
  v.custom_right_derivative_ = std::move(right_derivative);
  return v;
}

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// sign(t)|t|^(1+delta)
double signed_power(double t, double delta) {
  if (delta == 0.5) return t * std::sqrt(std::abs(t));
  return std::copysign(std::pow(std::abs(t), 1.0 + delta), t);
}

}  // namespace

double Potential::value(double y) const {
  switch (kind_) {
    case Kind::PowerEven: return ipow(y, k_);
    case Kind::FractionalPower: return std::pow(std::abs(y), 2.0 + delta_);
    case Kind::AbsoluteValue: return std::abs(y);
    case Kind::FlatWell: {
      const double e = std::max(0.0, std::abs(y) - a_);
      return e * e;
    }
    case Kind::CustomConvex: return custom_value_(y);
  }
  return 0.0;
}

double Potential::right_derivative(double y) const {
  switch (kind_) {
    case Kind::PowerEven: return k_ * ipow(y, k_ - 1);
    case Kind::FractionalPower: return (2.0 + delta_) * signed_power(y, delta_);
    case Kind::AbsoluteValue: return y >= 0.0 ? 1.0 : -1.0;
    case Kind::FlatWell: return 2.0 * std::copysign(std::max(0.0, std::abs(y) - a_), y);
    case Kind::CustomConvex: return custom_right_derivative_(y);
  }
  return 0.0;
}

double Potential::left_derivative(double y) const {
  switch (kind_) {
    case Kind::AbsoluteValue: return y > 0.0 ? 1.0 : -1.0;
    case Kind::CustomConvex: return -custom_right_derivative_(-y);
    default: return right_derivative(y);  // C^1 kinds
  }
}

PotentialCheck check_potential(const Potential& v) {
  PotentialCheck c;
  const int n = 601;
  double prev_right = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double y = -3.0 + 6.0 * i / (n - 1);
    const double vy = v.value(y);
    if (std::abs(vy - v.value(-y)) > 1e-12 * (1.0 + std::abs(vy))) c.symmetric = false;
    if (vy < 0.0) c.zero_minimum = false;
    const double l = v.left_derivative(y), r = v.right_derivative(y);
    if (l > r + 1e-12 || l < prev_right - 1e-12 * (1.0 + std::abs(l))) c.convex = false;
    prev_right = r;
  }
  if (std::abs(v.value(0.0)) > 1e-14) c.zero_minimum = false;
  return c;
}

double total_energy(const Potential& v, double y, std::span<const double> centres) {
  double s = 0.0;
  for (double c : centres) s += v.value(y - c);
  return s;
}

namespace {

// Root of an increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi).
template <class G>
double bisect_root(G&& g, double lo, double hi) {
  for (int it = 0; it < 400 && hi - lo > kArgminStopWidth; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double v = g(mid);
    if (v > 0.0) hi = mid;
    else if (v < 0.0) lo = mid;
    else return mid;
  }
  return lo + 0.5 * (hi - lo);
}

void require_values(std::span<const double> diffs) {
  if (diffs.empty()) fail(ErrorCode::InvalidArgument, "argmin needs at least one value");
}

}  // namespace

double argmin_power(int k, std::span<const double> diffs) {
  if (k < 2 || k % 2 != 0) fail(ErrorCode::InvalidArgument, "power potential needs an even k >= 2");
  require_values(diffs);
  const auto [mn, mx] = std::minmax_element(diffs.begin(), diffs.end());
  if (*mn == *mx) return *mn;
  return bisect_root(
      [&](double y) {
        double s = 0.0;
        for (double c : diffs) s += ipow(y - c, k - 1);
        return s;
      },
      *mn, *mx);
}

double argmin_fracpower(double delta, std::span<const double> diffs) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidArgument, "fractional potential needs 0 < delta < 1");
  require_values(diffs);
  const auto [mn, mx] = std::minmax_element(diffs.begin(), diffs.end());
  if (*mn == *mx) return *mn;
  return bisect_root(
      [&](double y) {
        double s = 0.0;
        for (double c : diffs) s += signed_power(y - c, delta);
        return s;
      },
      *mn, *mx);
}

double median_midpoint(std::span<const double> diffs) {
  if (diffs.empty() || diffs.size() % 2 != 0) fail(ErrorCode::InvalidArgument, "median midpoint needs an even count");
  std::vector<double> s(diffs.begin(), diffs.end());
  std::sort(s.begin(), s.end());
  const std::size_t d = s.size() / 2;
  return 0.5 * (s[d - 1] + s[d]);
}

double rsos_midpoint(std::span<const double> diffs) {
  require_values(diffs);
  const auto [mn, mx] = std::minmax_element(diffs.begin(), diffs.end());
  return 0.5 * (*mn + *mx);
}

MinimizingInterval convex_minimizing_interval(const Potential& v, std::span<const double> diffs) {
  require_values(diffs);
  const auto right = [&](double y) {
    double s = 0.0;
    for (double c : diffs) s += v.right_derivative(y - c);
    return s;
  };
  const auto left = [&](double y) {
    double s = 0.0;
    for (double c : diffs) s += v.left_derivative(y - c);
    return s;
  };
  const auto [mn, mx] = std::minmax_element(diffs.begin(), diffs.end());
  const double tol = kFlatDerivativeTolerance;

  // Expand until f'_+(lo) < 0 and f'_-(hi) > 0 (both beyond tolerance).
  double lo = *mn, hi = *mx, w = std::max(1.0, *mx - *mn);
  for (int i = 0; right(lo) >= -tol; ++i) {
    if (i > 60) fail(ErrorCode::Domain, "objective has no bounded minimizing interval");
    lo -= w;
    w *= 2.0;
  }
  w = std::max(1.0, *mx - *mn);
  for (int i = 0; left(hi) <= tol; ++i) {
    if (i > 60) fail(ErrorCode::Domain, "objective has no bounded minimizing interval");
    hi += w;
    w *= 2.0;
  }

  // alpha: smallest y with f'_+(y) >= -tol.
  const double alpha = bisect_root([&](double y) { return right(y) >= -tol ? 1.0 : -1.0; }, lo, hi);
  // beta: largest y with f'_-(y) <= tol.
  const double beta = bisect_root([&](double y) { return left(y) <= tol ? -1.0 : 1.0; }, lo, hi);
  return {std::min(alpha, beta), std::max(alpha, beta)};
}

double generic_convex_argmin(const Potential& v, std::span<const double> diffs) {
  require_values(diffs);
  const auto [mn, mx] = std::minmax_element(diffs.begin(), diffs.end());
  if (*mn == *mx) return *mn;
  return convex_minimizing_interval(v, diffs).midpoint();
}

}  // namespace growthlab
