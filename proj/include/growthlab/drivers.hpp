#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "growthlab/lattice.hpp"
#include "growthlab/matrix.hpp"
#include "growthlab/potentials.hpp"

namespace growthlab {

// Neighbour ordering used throughout: index 2i is x + e_{i+1}, index 2i+1 is
// x - e_{i+1} (0-based i).

using PhiFunction = std::function<double(std::span<const double>)>;

enum class MonotonicityMode { Global, AtZero };

struct MonotonicityCertificate {
  enum class Held { None, AtZero, Global };

  MonotonicityMode mode = MonotonicityMode::Global;
  bool holds = false;
  /// min over probes of {1 - div Phi, Phi_{v_a}}; negative when violated.
  double margin = 0.0;
  std::vector<double> violation_at;
  std::string detail;
};

const char* to_string(MonotonicityCertificate::Held held);

/// Phi : R^{2d} -> R for drivers of the form v(x) + Phi(neighbour diffs).
struct SmoothPhiSpec {
  std::string name;
  int dim = 1;
  PhiFunction phi;
  /// Analytic derivatives at 0, if known (length 2d, and 2d x 2d).
  std::optional<std::vector<double>> gradient_at_zero;
  std::optional<Matrix> hessian_at_zero;
  /// Set by certify(); which monotonicity condition was verified.
  MonotonicityCertificate::Held certified = MonotonicityCertificate::Held::None;
  /// When only the at-zero condition holds, initial data must be Lipschitz.
  bool require_lipschitz = true;

  double operator()(std::span<const double> v) const { return phi(v); }
};

/// Phi(v) = (1/2d) sum_a v_a  (discrete heat).
SmoothPhiSpec linear_average_phi(int dim);
/// Phi(v) = (1/4d) sum_a v_a + (1/8) sum_i (v_{+i} - v_{-i})^2; for d = 1
/// this is the deterministic KPZ example 1/4(v1+v-1) + 1/8(v1-v-1)^2.
SmoothPhiSpec kpz_phi(int dim);

/// Finite-difference step for derivatives of Phi at 0.
inline constexpr double kPhiFdStep = 1e-4;

std::vector<double> phi_gradient(const SmoothPhiSpec& spec, std::span<const double> at);
Matrix phi_hessian_at_zero(const SmoothPhiSpec& spec);
std::vector<double> phi_gradient_at_zero(const SmoothPhiSpec& spec);

MonotonicityCertificate check_monotonicity(const SmoothPhiSpec& spec, MonotonicityMode mode);
/// Runs Global then AtZero; stores and returns the strongest condition that held.
MonotonicityCertificate::Held certify(SmoothPhiSpec& spec);

enum class DriverKind { MaxNeighbor, PosPartAverage, SmoothPhi, ArgminPotential, MedianMidpoint, RsosMidpoint };

const char* to_string(DriverKind kind);

/// Growth rule phi mapping (centre, 2d neighbours) to the new height.
class Driver {
 public:
  static Driver max_neighbor(int dim);
  static Driver pospart_average(int dim);
  static Driver smooth_phi(SmoothPhiSpec spec);
  static Driver argmin(int dim, Potential potential);
  static Driver median(int dim);
  static Driver rsos(int dim);

  DriverKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  const Potential* potential() const noexcept { return potential_ ? &*potential_ : nullptr; }
  const SmoothPhiSpec* phi_spec() const noexcept { return phi_ ? phi_.get() : nullptr; }

  double apply(double centre, std::span<const double> neighbours) const;
  /// phi(0, diffs): the increment given neighbour differences.
  double increment(std::span<const double> diffs) const;

 private:
  Driver(DriverKind kind, int dim, std::string name);

  DriverKind kind_;
  int dim_;
  std::string name_;
  std::optional<Potential> potential_;
  std::shared_ptr<const SmoothPhiSpec> phi_;
};

double max_driver(double centre, std::span<const double> neighbours);
double pospart_driver(double centre, std::span<const double> neighbours);
double smooth_phi_driver(const SmoothPhiSpec& spec, double centre, std::span<const double> neighbours);

/// Hyperbolic if linear fields p.x move at first order in the slope, else
/// parabolic. Probes must include a non-axis direction.
ScalingMode detect_scaling(const Driver& driver, std::span<const std::vector<double>> probes);
ScalingMode detect_scaling(const Driver& driver);

}  // namespace growthlab
