#pragma once

#include <span>
#include <string>
#include <vector>

#include "growthlab/drivers.hpp"
#include "growthlab/matrix.hpp"

namespace growthlab {

double H_max(std::span<const double> p);
/// Limit Hamiltonian of the positive-part driver: (1/2d) sum_{a in B} (p.a)_+
/// = (1/2d) sum_i |p_i|.
double H_pospart(std::span<const double> p);

/// Coefficients of u_t = trace(A D^2u) + H(Du) for a smooth Phi.
struct SmoothAH {
  Matrix A;  // diagonal, A_ii = Phi_{v_i}(0)
  Matrix H;  // symmetric; H(p) = p^T H p

  int dim() const noexcept { return A.size(); }
  double hamiltonian(std::span<const double> p) const { return H.quadratic_form(p); }
  double evaluate(const Matrix& X, std::span<const double> p) const;
};

/// Tolerance for Phi_{v_i}(0) == Phi_{v_-i}(0).
inline constexpr double kPhiSymmetryTolerance = 1e-6;

SmoothAH smooth_limit_operator(const SmoothPhiSpec& spec);

/// sum |p_i|^e X_ii / (2 sum |p_i|^e); p must be nonzero.
double F_weighted(const Matrix& X, std::span<const double> p, double exponent);

struct Envelope {
  double upper;
  double lower;
};

/// (1/2 max_i X_ii, 1/2 min_i X_ii): the envelopes of the weighted operators at p = 0.
Envelope envelopes_weighted(const Matrix& X);

enum class Orientation { MinCoordinates, MaxCoordinates };

/// Coordinates (0-based, ascending) attaining the minimal (median) or maximal
/// (crystalline) |p_i|, exact comparison.
struct PartitionLabel {
  std::vector<int> A;
  Orientation orientation;

  bool singleton() const { return A.size() == 1; }
  bool operator==(const PartitionLabel&) const = default;
};

PartitionLabel classify_partition(std::span<const double> p, Orientation orientation);

/// F or its envelope pair. Off the singular set upper == lower == F.
struct OperatorValue {
  double upper;
  double lower;
  bool singular;

  double value() const { return upper; }
  bool contains(double v, double tol = 0.0) const { return v >= lower - tol && v <= upper + tol; }
};

OperatorValue F_median(const Matrix& X, std::span<const double> p);
OperatorValue F_crystalline(const Matrix& X, std::span<const double> p);

enum class OperatorKind { HJMax, HJPosPart, SmoothAH, WeightedPower, WeightedFractional, MedianOp, CrystallineOp };

const char* to_string(OperatorKind kind);

class LimitOperator {
 public:
  static LimitOperator hj_max(int dim);
  static LimitOperator hj_pospart(int dim);
  static LimitOperator smooth(SmoothAH ah);
  static LimitOperator weighted_power(int dim, int k);
  static LimitOperator weighted_fractional(int dim, double delta);
  static LimitOperator median(int dim);
  static LimitOperator crystalline(int dim);

  OperatorKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  /// Weight exponent for the weighted kinds (k - 2 or delta).
  double exponent() const noexcept { return exponent_; }
  const SmoothAH& smooth_ah() const { return ah_; }

  bool singular(std::span<const double> p) const;
  OperatorValue evaluate(const Matrix& X, std::span<const double> p) const;

 private:
  LimitOperator(OperatorKind kind, int dim, std::string name);

  OperatorKind kind_;
  int dim_;
  std::string name_;
  double exponent_ = 0.0;
  SmoothAH ah_;
};

/// The operator a driver's scheme is consistent with.
LimitOperator limit_operator_for(const Driver& driver);

}  // namespace growthlab
