#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "growthlab/drivers.hpp"
#include "growthlab/limit_operators.hpp"
#include "growthlab/matrix.hpp"

namespace growthlab {

/// Smooth function with analytic gradient and Hessian.
class TestFunction {
 public:
  enum class Family { Quadratic, CosineProduct, Bump };

  /// phi(y) = p.(y - x0) + 1/2 (y - x0)^T X (y - x0)
  static TestFunction quadratic(std::vector<double> p, Matrix X, std::vector<double> x0 = {});
  static TestFunction cosine_product(int dim);
  static TestFunction bump(int dim);

  Family family() const noexcept { return family_; }
  int dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }

  double operator()(std::span<const double> y) const;
  std::vector<double> gradient(std::span<const double> y) const;
  Matrix hessian(std::span<const double> y) const;

 private:
  TestFunction(Family family, int dim, std::string name);

  Family family_;
  int dim_;
  std::string name_;
  std::vector<double> p_;
  Matrix X_;
  std::vector<double> x0_;
};

/// Central finite differences agree with the analytic derivatives to `tol`.
bool self_check(const TestFunction& phi, std::span<const double> at, double tol = 1e-5);

/// (S(eps)phi(y) - phi(y)) / eps on the stencil {y, y +- h e_i}, h = eps^exponent.
double consistency_ratio(const Driver& driver, const TestFunction& phi, std::span<const double> y,
                         double epsilon, ScalingMode scaling);

enum class OffsetSchedule { AtPoint, Approach };

const char* to_string(OffsetSchedule schedule);

inline constexpr double kConsistencyTolerance = 5e-3;
inline constexpr double kEnvelopeTolerance = 1e-6;
/// Error changes below this are treated as no change when judging decrease.
inline constexpr double kRatioNoiseFloor = 1e-8;

struct SweepOptions {
  OffsetSchedule offset = OffsetSchedule::Approach;
  /// Unit direction for y_eps = x + sqrt(eps) u; empty means (1,1,..)/sqrt(d).
  std::vector<double> direction;
  double tolerance = kConsistencyTolerance;
  double envelope_tolerance = kEnvelopeTolerance;
};

struct ConsistencyReport {
  std::string driver;
  std::string test_function;
  std::vector<double> x;
  std::vector<double> epsilons;
  std::vector<double> ratios;
  std::vector<double> errors;  // |ratio - F|, empty on the singular set
  OperatorValue target{0.0, 0.0, false};
  OffsetSchedule offset = OffsetSchedule::Approach;
  bool passed = false;
  std::string verdict_reason;
};

ConsistencyReport consistency_sweep(const Driver& driver, const TestFunction& phi, std::span<const double> x,
                                    std::span<const double> epsilons, const SweepOptions& options = {});

/// Phi^eps(y) within [min_i Delta_i, max_i Delta_i], Delta_i = 1/2 (c_{+i} + c_{-i})
/// computed from the same stencil differences the driver sees. Exact, no tolerance.
bool sandwich_check(const Driver& driver, const TestFunction& phi, std::span<const double> y, double epsilon);

/// Random quadratic test function with gradient off the driver's singular set
/// (or on it, when `on_singular`).
TestFunction random_quadratic(const LimitOperator& op, std::mt19937_64& rng, bool on_singular);

struct ConsistencyBatchOptions {
  std::vector<double> epsilons{1e-2, 1e-4, 1e-6};
  int quadratics = 20;
  /// Probes on the singular set; skipped when the operator has none.
  int singular_probes = 20;
  SweepOptions sweep;
};

struct ConsistencyBatch {
  std::vector<ConsistencyReport> reports;
  bool passed = true;
  int failures = 0;
};

/// Sweeps over random quadratics centred at the origin, off and on the
/// singular set of the driver's limit operator.
ConsistencyBatch run_consistency_batch(const Driver& driver, const ConsistencyBatchOptions& options, std::uint64_t seed);

/// One row per (driver, test function, x, eps).
void write_consistency_csv(const ConsistencyBatch& batch, const std::string& path);

}  // namespace growthlab
