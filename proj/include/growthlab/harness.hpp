#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "growthlab/config.hpp"
#include "growthlab/lattice.hpp"
#include "growthlab/registry.hpp"

namespace growthlab {

enum class OracleKind { HopfLax, SeparableHeat, FdCross, SelfConvergence };

const char* to_string(OracleKind kind);
OracleKind oracle_from_string(const std::string& name);

inline constexpr double kDefaultResourceCap = 5e9;

struct ExperimentConfig {
  std::string id = "experiment";
  int dim = 1;
  Window window = Window::cube(1, -2.0, 2.0);
  double horizon = 1.0;
  std::vector<double> epsilons;
  DriverSpec driver;
  std::string initial = "tent";
  OracleKind oracle = OracleKind::HopfLax;
  int samples_per_axis = 33;
  /// Absolute sample times; empty means {0, T/4, T/2, 3T/4, T}.
  std::vector<double> times;
  /// Final-error threshold (calibration artifact; absent means no threshold).
  std::optional<double> threshold;
  double resource_cap = kDefaultResourceCap;
  /// Hopf-Lax search resolution as a fraction of t.
  double oracle_resolution = 1.0 / 512.0;
  /// Separable-heat diffusivity; derived from the driver's limit operator if absent.
  std::optional<double> diffusivity;
  double c_cfl = 0.4;
  /// fd cross-solver domain [fd_lo, fd_hi]^d and spacing relative to the lattice spacing.
  double fd_lo = -8.0;
  double fd_hi = 8.0;
  double fd_spacing_factor = 1.0;
  std::optional<ScalingKind> scaling;  // detected from the driver when absent
  std::string csv_path;
  std::string json_path;
  std::string config_text;
};

/// Keys accepted by `run` configs, per section.
std::map<std::string, std::set<std::string>> experiment_schema();
ExperimentConfig experiment_from_config(const ConfigFile& config);

/// Cell-midpoint sample grid: n points per axis inside the window.
std::vector<std::vector<double>> sample_grid(const Window& window, int per_axis);
std::vector<double> default_times(double horizon);

struct SupError {
  std::vector<double> per_time;
  double overall = 0.0;
};

/// Oracle values indexed [time][point].
using OracleTable = std::vector<std::vector<double>>;

/// max over sampled (x, t) of |u^eps(x,t) - oracle(x,t)|.
SupError sup_error(const Trajectory& trajectory, const OracleTable& oracle,
                   std::span<const std::vector<double>> points, std::span<const double> times);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  int used = 0;
  std::string note;
  bool valid() const { return used >= 3; }
};

/// Least squares of log(error) against log(eps); nonpositive errors are skipped.
RateFit rate_fit(std::span<const double> epsilons, std::span<const double> errors);

struct EpsilonRun {
  double epsilon = 0.0;
  /// For self-convergence rows, the finer eps this run is compared with.
  std::optional<double> reference_epsilon;
  std::vector<double> slice_errors;
  double sup_error = 0.0;
  std::int64_t steps = 0;
  double site_updates = 0.0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string id;
  std::string driver;
  std::string oracle;
  std::string scaling;
  std::vector<double> times;
  std::vector<EpsilonRun> runs;
  RateFit fit;
  bool passed = false;
  std::string verdict_reason;
  double seconds = 0.0;

  std::vector<double> errors() const;
};

/// Verdict rule: strictly decreasing errors, and the last below the threshold if one is set.
void assign_verdict(ConvergenceReport& report, std::optional<double> threshold);

/// Rescaled samples of one run: [time][point].
OracleTable simulate_samples(const Driver& driver, const InitialData& u0, const Window& window, double horizon,
                             double epsilon, ScalingMode scaling, std::span<const std::vector<double>> points,
                             std::span<const double> times, double resource_cap, EpsilonRun* stats = nullptr);

struct SelfConvergenceOptions {
  int samples_per_axis = 33;
  std::vector<double> times;
  double resource_cap = kDefaultResourceCap;
  std::optional<ScalingMode> scaling;
};

/// Sup differences between consecutive rescaled trajectories (eps ratio 4) on
/// the common sample grid; passes when they strictly decrease.
ConvergenceReport self_convergence(const Driver& driver, const InitialData& u0, std::span<const double> epsilons,
                                   const Window& window, double horizon, const SelfConvergenceOptions& options = {});

ConvergenceReport run_experiment(const ExperimentConfig& config);

void write_csv(const ConvergenceReport& report, const std::string& path);
std::string report_json(const ConvergenceReport& report, const ExperimentConfig& config);

}  // namespace growthlab
