#pragma once

#include <functional>
#include <span>
#include <string>

namespace growthlab {

/// Symmetric convex pair potential V with V(0) = 0 = min V.
class Potential {
 public:
  enum class Kind { PowerEven, FractionalPower, AbsoluteValue, FlatWell, CustomConvex };

  /// V(y) = y^k, k even >= 2.
  static Potential power_even(int k);
  /// V(y) = |y|^(2 + delta), 0 < delta < 1.
  static Potential fractional_power(double delta);
  /// V(y) = |y|
  static Potential absolute_value();
  /// V(y) = ((|y| - a)_+)^2: zero on [-a, a].
  static Potential flat_well(double a);
  /// User potential with its right derivative; the left derivative follows
  /// from symmetry, V'_-(y) = -V'_+(-y).
  static Potential custom(std::string name, std::function<double(double)> value,
                          std::function<double(double)> right_derivative);

  Kind kind() const noexcept { return kind_; }
  int k() const noexcept { return k_; }
  double delta() const noexcept { return delta_; }
  double a() const noexcept { return a_; }
  const std::string& name() const noexcept { return name_; }

  double value(double y) const;
  double right_derivative(double y) const;
  double left_derivative(double y) const;

 private:
  Potential() = default;

  Kind kind_ = Kind::AbsoluteValue;
  int k_ = 0;
  double delta_ = 0.0;
  double a_ = 0.0;
  std::string name_;
  std::function<double(double)> custom_value_;
  std::function<double(double)> custom_right_derivative_;
};

struct PotentialCheck {
  bool symmetric = true;
  bool convex = true;
  bool zero_minimum = true;
};

/// Symmetry, convexity (one-sided derivative nondecreasing) and V(0)=0<=V on
/// a probe grid over [-3, 3].
PotentialCheck check_potential(const Potential& v);

/// Objective y -> sum_j V(y - c_j).
double total_energy(const Potential& v, double y, std::span<const double> centres);

// Argmin rules. Each takes the 2d neighbour differences and returns the
// minimizer of sum_j V(y - c_j) (midpoint of the minimizing interval when it
// is not a single point).

/// Unique root of sum_j (y - c_j)^(k-1) = 0 by bisection on [min c, max c].
double argmin_power(int k, std::span<const double> diffs);
/// Unique root of sum_j sign(y - c_j)|y - c_j|^(1+delta) = 0 by bisection.
double argmin_fracpower(double delta, std::span<const double> diffs);
/// Midpoint of the median interval: mean of the d-th and (d+1)-th order
/// statistics of the 2d values.
double median_midpoint(std::span<const double> diffs);
/// (min + max) / 2
double rsos_midpoint(std::span<const double> diffs);

struct MinimizingInterval {
  double lo;
  double hi;
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Minimizing interval of sum_j V(y - c_j) located by bisection on the sign of
/// the one-sided derivatives.
MinimizingInterval convex_minimizing_interval(const Potential& v, std::span<const double> diffs);
double generic_convex_argmin(const Potential& v, std::span<const double> diffs);

/// Bracket width at which the bisections stop. The contract is 1e-12.
inline constexpr double kArgminTolerance = 1e-12;
inline constexpr double kArgminStopWidth = 1e-13;
/// One-sided derivatives below this magnitude count as zero.
inline constexpr double kFlatDerivativeTolerance = 1e-13;

}  // namespace growthlab
