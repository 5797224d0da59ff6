#include "growthlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "growthlab/error.hpp"
#include "growthlab/oracles.hpp"

namespace growthlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::HopfLax: return "hopf_lax";
    case OracleKind::SeparableHeat: return "separable_heat";
    case OracleKind::FdCross: return "fd_cross";
    case OracleKind::SelfConvergence: return "self_convergence";
  }
  return "?";
}

OracleKind oracle_from_string(const std::string& name) {
  for (OracleKind k : {OracleKind::HopfLax, OracleKind::SeparableHeat, OracleKind::FdCross, OracleKind::SelfConvergence})
    if (name == to_string(k)) return k;
  fail(ErrorCode::Config, "unknown oracle kind '" + name + "' (expected hopf_lax, separable_heat, fd_cross or self_convergence)");
}

std::map<std::string, std::set<std::string>> experiment_schema() {
  std::set<std::string> driver_keys;
  for (const auto& k : driver_key_names()) driver_keys.insert(k);
  return {
      {"experiment", {"id", "d", "window", "horizon", "epsilons", "samples", "times", "threshold", "resource_cap", "scaling"}},
      {"driver", driver_keys},
      {"initial", {"name"}},
      {"oracle", {"kind", "resolution", "diffusivity", "c_cfl", "fd_window", "fd_spacing"}},
      {"output", {"csv", "json"}},
  };
}

ExperimentConfig experiment_from_config(const ConfigFile& config) {
  config.validate(experiment_schema());
  ExperimentConfig c;
  c.config_text = config.text();
  c.id = config.get("experiment", "id").value_or(c.id);
  const long long d = config.get_int("experiment", "d", 1);
  if (d < 1 || d > 8) fail(ErrorCode::Config, "[experiment] d must be in 1..8");
  c.dim = static_cast<int>(d);

  const std::vector<double> w = config.get_doubles("experiment", "window");
  if (w.empty()) {
    c.window = Window::cube(c.dim, -2.0, 2.0);
  } else if (w.size() == 2) {
    c.window = Window::cube(c.dim, w[0], w[1]);
  } else if (w.size() == 2 * static_cast<std::size_t>(c.dim)) {
    c.window = Window{{}, {}};
    for (int i = 0; i < c.dim; ++i) {
      c.window.lo.push_back(w[2 * i]);
      c.window.hi.push_back(w[2 * i + 1]);
    }
  } else {
    fail(ErrorCode::Config, "[experiment] window must be 'lo, hi' or one 'lo, hi' pair per axis");
  }
  for (int i = 0; i < c.dim; ++i)
    if (!(c.window.hi[i] > c.window.lo[i])) fail(ErrorCode::Config, "[experiment] window must have lo < hi");

  c.horizon = config.get_double("experiment", "horizon", c.horizon);
  if (!(c.horizon > 0.0)) fail(ErrorCode::Config, "[experiment] horizon must be positive");
  c.epsilons = config.get_doubles("experiment", "epsilons");
  if (c.epsilons.empty()) fail(ErrorCode::Config, "missing required key [experiment] epsilons");
  for (std::size_t k = 0; k < c.epsilons.size(); ++k) {
    if (!(c.epsilons[k] > 0.0)) fail(ErrorCode::Config, "[experiment] epsilons must be positive");
    if (k && !(c.epsilons[k] < c.epsilons[k - 1])) fail(ErrorCode::Config, "[experiment] epsilons must be strictly decreasing");
  }
  const long long samples = config.get_int("experiment", "samples", c.samples_per_axis);
  if (samples < 1) fail(ErrorCode::Config, "[experiment] samples must be positive");
  c.samples_per_axis = static_cast<int>(samples);
  c.times = config.get_doubles("experiment", "times");
  for (double t : c.times)
    if (t < 0.0 || t > c.horizon) fail(ErrorCode::Config, "[experiment] times must lie in [0, horizon]");
  if (auto t = config.get("experiment", "threshold")) c.threshold = config.get_double("experiment", "threshold", 0.0);
  c.resource_cap = config.get_double("experiment", "resource_cap", c.resource_cap);
  if (auto s = config.get("experiment", "scaling")) {
    if (*s == "hyperbolic") c.scaling = ScalingKind::Hyperbolic;
    else if (*s == "parabolic") c.scaling = ScalingKind::Parabolic;
    else fail(ErrorCode::Config, "[experiment] scaling must be hyperbolic or parabolic");
  }

  c.driver = driver_spec_from_config(config);
  c.initial = config.get("initial", "name").value_or(c.initial);
  c.oracle = oracle_from_string(config.get("oracle", "kind").value_or("hopf_lax"));
  c.oracle_resolution = config.get_double("oracle", "resolution", c.oracle_resolution);
  if (!(c.oracle_resolution > 0.0)) fail(ErrorCode::Config, "[oracle] resolution must be positive");
  if (config.get("oracle", "diffusivity")) c.diffusivity = config.get_double("oracle", "diffusivity", 0.0);
  c.c_cfl = config.get_double("oracle", "c_cfl", c.c_cfl);
  if (!(c.c_cfl > 0.0)) fail(ErrorCode::Config, "[oracle] c_cfl must be positive");
  const std::vector<double> fw = config.get_doubles("oracle", "fd_window");
  if (!fw.empty()) {
    if (fw.size() != 2 || !(fw[1] > fw[0])) fail(ErrorCode::Config, "[oracle] fd_window must be 'lo, hi' with lo < hi");
    c.fd_lo = fw[0];
    c.fd_hi = fw[1];
  }
  c.fd_spacing_factor = config.get_double("oracle", "fd_spacing", c.fd_spacing_factor);
  if (!(c.fd_spacing_factor > 0.0)) fail(ErrorCode::Config, "[oracle] fd_spacing must be positive");
  c.csv_path = config.get("output", "csv").value_or(c.id + ".csv");
  c.json_path = config.get("output", "json").value_or(c.id + ".json");
  return c;
}

std::vector<std::vector<double>> sample_grid(const Window& window, int per_axis) {
  if (per_axis < 1) fail(ErrorCode::InvalidArgument, "sample grid needs at least one point per axis");
  const int d = window.dim();
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> x(d);
    for (int a = 0; a < d; ++a) x[a] = window.lo[a] + (idx[a] + 0.5) * (window.hi[a] - window.lo[a]) / per_axis;
    pts.push_back(std::move(x));
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++idx[a] < per_axis) break;
      idx[a] = 0;
    }
    if (a < 0) break;
  }
  return pts;
}

std::vector<double> default_times(double horizon) {
  return {0.0, 0.25 * horizon, 0.5 * horizon, 0.75 * horizon, horizon};
}

SupError sup_error(const Trajectory& trajectory, const OracleTable& oracle, std::span<const std::vector<double>> points,
                   std::span<const double> times) {
  if (oracle.size() != times.size()) fail(ErrorCode::InvalidArgument, "oracle table has the wrong number of times");
  SupError e;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (oracle[k].size() != points.size()) fail(ErrorCode::InvalidArgument, "oracle table has the wrong number of points");
    double m = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j)
      m = std::max(m, std::abs(evaluate_scaled(trajectory, points[j], times[k]) - oracle[k][j]));
    e.per_time.push_back(m);
    e.overall = std::max(e.overall, m);
  }
  return e;
}

RateFit rate_fit(std::span<const double> epsilons, std::span<const double> errors) {
  if (epsilons.size() != errors.size()) fail(ErrorCode::InvalidArgument, "rate fit needs one error per epsilon");
  RateFit fit;
  std::vector<double> lx, ly;
  int skipped = 0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k] > 0.0 && epsilons[k] > 0.0) {
      lx.push_back(std::log(epsilons[k]));
      ly.push_back(std::log(errors[k]));
    } else {
      ++skipped;
    }
  }
  fit.used = static_cast<int>(lx.size());
  std::ostringstream note;
  if (skipped) note << skipped << " nonpositive error(s) excluded";
  if (fit.used < 3) {
    if (skipped) note << "; ";
    note << "fewer than 3 positive errors, no fit";
    fit.note = note.str();
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.note = note.str();
  return fit;
}

std::vector<double> ConvergenceReport::errors() const {
  std::vector<double> e;
  for (const auto& r : runs) e.push_back(r.sup_error);
  return e;
}

void assign_verdict(ConvergenceReport& report, std::optional<double> threshold) {
  const std::vector<double> e = report.errors();
  std::ostringstream why;
  bool ok = !e.empty();
  if (!ok) why << "no runs";
  for (std::size_t k = 1; ok && k < e.size(); ++k)
    if (!(e[k] < e[k - 1])) {
      ok = false;
      why << "errors not strictly decreasing (" << format_double(e[k - 1]) << " -> " << format_double(e[k]) << ")";
    }
  if (ok && threshold && !(e.back() <= *threshold)) {
    ok = false;
    why << "final error " << e.back() << " above threshold " << *threshold;
  }
  if (ok) {
    why << "errors strictly decreasing";
    if (threshold) why << ", final error " << e.back() << " <= threshold " << *threshold;
  }
  report.passed = ok;
  report.verdict_reason = why.str();
}

OracleTable simulate_samples(const Driver& driver, const InitialData& u0, const Window& window, double horizon,
                             double epsilon, ScalingMode scaling, std::span<const std::vector<double>> points,
                             std::span<const double> times, double resource_cap, EpsilonRun* stats) {
  const auto start = Clock::now();
  const std::int64_t steps = time_index(horizon, epsilon);
  std::set<std::int64_t> slices;
  for (double t : times) {
    const std::int64_t k = time_index(t, epsilon);
    if (k > steps) fail(ErrorCode::InvalidArgument, "sample time beyond the horizon");
    slices.insert(k);
  }
  const Box initial_box = window_image(window, scaling.spacing(epsilon)).grown(steps);
  const double updates = projected_site_updates(initial_box, steps);
  if (updates > resource_cap) {
    std::ostringstream os;
    os << "eps=" << epsilon << " needs " << updates << " site updates, above the resource cap " << resource_cap;
    fail(ErrorCode::Resource, os.str());
  }
  const Trajectory traj = evolve(init_field(u0, window, steps, epsilon, scaling), driver, steps,
                                 Trajectory::Storage::Snapshots, slices);
  OracleTable out(times.size(), std::vector<double>(points.size()));
  for (std::size_t k = 0; k < times.size(); ++k)
    for (std::size_t j = 0; j < points.size(); ++j) out[k][j] = evaluate_scaled(traj, points[j], times[k]);
  if (stats) {
    stats->epsilon = epsilon;
    stats->steps = steps;
    stats->site_updates = updates;
    stats->seconds = seconds_since(start);
  }
  return out;
}

namespace {

void fill_errors(EpsilonRun& run, const OracleTable& a, const OracleTable& b) {
  run.slice_errors.clear();
  run.sup_error = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double m = 0.0;
    for (std::size_t j = 0; j < a[k].size(); ++j) m = std::max(m, std::abs(a[k][j] - b[k][j]));
    run.slice_errors.push_back(m);
    run.sup_error = std::max(run.sup_error, m);
  }
}

void finish(ConvergenceReport& report, std::optional<double> threshold) {
  std::vector<double> eps;
  for (const auto& r : report.runs) eps.push_back(r.epsilon);
  report.fit = rate_fit(eps, report.errors());
  assign_verdict(report, threshold);
}

}  // namespace

ConvergenceReport self_convergence(const Driver& driver, const InitialData& u0, std::span<const double> epsilons,
                                   const Window& window, double horizon, const SelfConvergenceOptions& options) {
  const auto start = Clock::now();
  if (epsilons.size() < 3) fail(ErrorCode::InvalidArgument, "self-convergence needs at least 3 epsilons");
  for (std::size_t k = 1; k < epsilons.size(); ++k)
    if (std::abs(epsilons[k - 1] / epsilons[k] - 4.0) > 1e-9)
      fail(ErrorCode::InvalidArgument, "self-convergence needs consecutive epsilons in ratio 4");
  const ScalingMode scaling = options.scaling.value_or(detect_scaling(driver));
  const auto points = sample_grid(window, options.samples_per_axis);
  const std::vector<double> times = options.times.empty() ? default_times(horizon) : options.times;

  ConvergenceReport report;
  report.driver = driver.name();
  report.oracle = to_string(OracleKind::SelfConvergence);
  report.scaling = to_string(scaling.kind);
  report.times = times;
  std::vector<OracleTable> samples;
  std::vector<EpsilonRun> stats(epsilons.size());
  for (std::size_t k = 0; k < epsilons.size(); ++k)
    samples.push_back(simulate_samples(driver, u0, window, horizon, epsilons[k], scaling, points, times,
                                       options.resource_cap, &stats[k]));
  for (std::size_t k = 0; k + 1 < epsilons.size(); ++k) {
    EpsilonRun run = stats[k];
    run.reference_epsilon = epsilons[k + 1];
    run.seconds += stats[k + 1].seconds;
    fill_errors(run, samples[k], samples[k + 1]);
    report.runs.push_back(std::move(run));
  }
  report.seconds = seconds_since(start);
  finish(report, std::nullopt);
  return report;
}

namespace {

double derived_diffusivity(const LimitOperator& op) {
  switch (op.kind()) {
    case OperatorKind::CrystallineOp: return 0.5;
    case OperatorKind::MedianOp: return op.dim() == 1 ? 0.5 : 0.0;  // x_2 is the minimal coordinate
    case OperatorKind::WeightedPower:
    case OperatorKind::WeightedFractional: return op.exponent() > 0.0 ? 0.5 : 0.5 / op.dim();
    case OperatorKind::SmoothAH:
      for (int i = 0; i < op.dim(); ++i)
        for (int j = 0; j < op.dim(); ++j)
          if (op.smooth_ah().H(i, j) != 0.0)
            fail(ErrorCode::Config, "separable heat oracle needs H = 0 for a smooth driver");
      return op.smooth_ah().A(0, 0);
    default: fail(ErrorCode::Config, "separable heat oracle does not apply to operator " + op.name());
  }
}

}  // namespace

ConvergenceReport run_experiment(const ExperimentConfig& config) {
  const auto start = Clock::now();
  const Driver driver = make_driver(config.driver, config.dim);
  const InitialData u0 = make_initial_data(config.initial);
  if (config.window.dim() != config.dim) fail(ErrorCode::Config, "window dimension differs from d");
  if (config.epsilons.empty()) fail(ErrorCode::Config, "epsilon list is empty");
  for (std::size_t k = 1; k < config.epsilons.size(); ++k)
    if (!(config.epsilons[k] < config.epsilons[k - 1])) fail(ErrorCode::Config, "epsilons must be strictly decreasing");

  const ScalingMode scaling = detect_scaling(driver);
  if (config.scaling && *config.scaling != scaling.kind)
    fail(ErrorCode::Config, std::string("configured scaling differs from the driver's detected ") + to_string(scaling.kind) +
                                " scaling");
  if (const SmoothPhiSpec* spec = driver.phi_spec()) {
    if (spec->certified == MonotonicityCertificate::Held::None)
      fail(ErrorCode::Config, "smooth driver " + spec->name + " is not monotone near zero");
    if (spec->certified == MonotonicityCertificate::Held::AtZero && spec->require_lipschitz && !u0.lipschitz)
      fail(ErrorCode::Config, "driver " + spec->name + " is monotone only near zero and needs Lipschitz initial data");
  }
  const auto points = sample_grid(config.window, config.samples_per_axis);
  const std::vector<double> times = config.times.empty() ? default_times(config.horizon) : config.times;

  if (config.oracle == OracleKind::SelfConvergence) {
    SelfConvergenceOptions opt{config.samples_per_axis, times, config.resource_cap, scaling};
    ConvergenceReport r = self_convergence(driver, u0, config.epsilons, config.window, config.horizon, opt);
    r.id = config.id;
    assign_verdict(r, config.threshold);
    r.seconds = seconds_since(start);
    return r;
  }

  const LimitOperator op = limit_operator_for(driver);
  ConvergenceReport report;
  report.id = config.id;
  report.driver = driver.name();
  report.oracle = to_string(config.oracle);
  report.scaling = to_string(scaling.kind);
  report.times = times;

  // Oracle values that do not depend on eps are computed once.
  OracleTable fixed;
  if (config.oracle == OracleKind::HopfLax) {
    if (scaling.kind != ScalingKind::Hyperbolic) fail(ErrorCode::Config, "hopf_lax oracle needs a hyperbolic driver");
    Hamiltonian ham;
    if (op.kind() == OperatorKind::HJMax) ham = Hamiltonian::HJMax;
    else if (op.kind() == OperatorKind::HJPosPart) ham = Hamiltonian::HJPosPart;
    else fail(ErrorCode::Config, "hopf_lax oracle does not apply to operator " + op.name());
    fixed.assign(times.size(), std::vector<double>(points.size()));
    for (std::size_t k = 0; k < times.size(); ++k)
      for (std::size_t j = 0; j < points.size(); ++j)
        fixed[k][j] = hopf_lax_oracle(ham, u0, points[j], times[k], times[k] * config.oracle_resolution);
  } else if (config.oracle == OracleKind::SeparableHeat) {
    if (scaling.kind != ScalingKind::Parabolic) fail(ErrorCode::Config, "separable_heat oracle needs a parabolic driver");
    if (!u0.cosine_modes) fail(ErrorCode::Config, "separable_heat oracle needs cosine-series initial data");
    const double D = config.diffusivity ? *config.diffusivity : derived_diffusivity(op);
    fixed.assign(times.size(), std::vector<double>(points.size()));
    for (std::size_t k = 0; k < times.size(); ++k)
      for (std::size_t j = 0; j < points.size(); ++j)
        fixed[k][j] = separable_heat_oracle(u0, D, points[j][0], times[k]);
  } else {
    if (op.kind() != OperatorKind::SmoothAH) fail(ErrorCode::Config, "fd_cross oracle needs a smooth_phi driver");
    for (int i = 0; i < config.dim; ++i)
      if (config.window.lo[i] < config.fd_lo || config.window.hi[i] > config.fd_hi)
        fail(ErrorCode::Config, "fd_window must contain the sampling window");
  }

  for (double eps : config.epsilons) {
    EpsilonRun run;
    const OracleTable sim = simulate_samples(driver, u0, config.window, config.horizon, eps, scaling, points, times,
                                             config.resource_cap, &run);
    if (config.oracle == OracleKind::FdCross) {
      const auto fd_start = Clock::now();
      const double dx = scaling.spacing(eps) * config.fd_spacing_factor;
      FdGrid grid{config.dim, config.fd_lo, config.fd_hi,
                  std::max(2, static_cast<int>(std::lround((config.fd_hi - config.fd_lo) / dx)))};
      FdOptions fo;
      fo.c_cfl = config.c_cfl;
      const auto sols = fd_cross_solver(op.smooth_ah(), u0, grid, times, fo);
      OracleTable ref(times.size(), std::vector<double>(points.size()));
      for (std::size_t k = 0; k < times.size(); ++k)
        for (std::size_t j = 0; j < points.size(); ++j) ref[k][j] = sols[k].interpolate(points[j]);
      fill_errors(run, sim, ref);
      run.seconds += seconds_since(fd_start);
    } else {
      fill_errors(run, sim, fixed);
    }
    report.runs.push_back(std::move(run));
  }
  report.seconds = seconds_since(start);
  finish(report, config.threshold);
  return report;
}

void write_csv(const ConvergenceReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Config, "cannot write " + path);
  out << "experiment_id,epsilon,time,sup_error\n";
  for (const auto& run : report.runs)
    for (std::size_t k = 0; k < report.times.size(); ++k)
      out << report.id << ',' << format_double(run.epsilon) << ',' << format_double(report.times[k]) << ','
          << format_double(run.slice_errors[k]) << '\n';
  if (!out) fail(ErrorCode::Config, "failed writing " + path);
}

std::string report_json(const ConvergenceReport& report, const ExperimentConfig& config) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["experiment_id"] = report.id;
  ordered_json cfg;
  cfg["text"] = config.config_text;
  cfg["d"] = config.dim;
  cfg["window"] = {{"lo", config.window.lo}, {"hi", config.window.hi}};
  cfg["horizon"] = config.horizon;
  cfg["epsilons"] = config.epsilons;
  cfg["driver"] = config.driver.name;
  cfg["initial"] = config.initial;
  cfg["oracle"] = to_string(config.oracle);
  cfg["samples_per_axis"] = config.samples_per_axis;
  cfg["resource_cap"] = config.resource_cap;
  j["config"] = cfg;
  j["driver"] = report.driver;
  j["scaling"] = report.scaling;
  j["oracle"] = report.oracle;
  j["times"] = report.times;
  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) {
    ordered_json e;
    e["epsilon"] = r.epsilon;
    if (r.reference_epsilon) e["reference_epsilon"] = *r.reference_epsilon;
    e["sup_error"] = r.sup_error;
    e["slice_errors"] = r.slice_errors;
    e["steps"] = r.steps;
    e["site_updates"] = r.site_updates;
    runs.push_back(e);
  }
  j["errors"] = runs;
  j["rate_fit"] = {{"slope", report.fit.slope},
                   {"intercept", report.fit.intercept},
                   {"points_used", report.fit.used},
                   {"valid", report.fit.valid()},
                   {"note", report.fit.note.empty() ? "diagnostic only" : report.fit.note}};
  if (config.threshold) {
    j["threshold"] = *config.threshold;
    j["threshold_note"] = "calibration threshold, not a proven rate";
  }
  j["verdict"] = report.passed ? "PASS" : "FAIL";
  j["verdict_reason"] = report.verdict_reason;
  ordered_json rt;
  rt["total_seconds"] = report.seconds;
  ordered_json per = ordered_json::array();
  for (const auto& r : report.runs) per.push_back(r.seconds);
  rt["run_seconds"] = per;
  j["runtime"] = rt;
  return j.dump(2) + "\n";
}

}  // namespace growthlab
