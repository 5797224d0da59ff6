// Acceptance run: one PASS/FAIL line per criterion, each with its runtime bound.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "growthlab/consistency.hpp"
#include "growthlab/drivers.hpp"
#include "growthlab/error.hpp"
#include "growthlab/harness.hpp"
#include "growthlab/initial_data.hpp"
#include "growthlab/limit_operators.hpp"
#include "growthlab/oracles.hpp"
#include "growthlab/properties.hpp"
#include "growthlab/registry.hpp"

using namespace growthlab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool ok = o.passed && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %d. %s: %s; %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              limit_seconds, in_time ? "" : " TIME EXCEEDED");
  std::fflush(stdout);
}

std::string errors_text(const ConvergenceReport& r) {
  std::ostringstream os;
  os.precision(4);
  for (std::size_t k = 0; k < r.runs.size(); ++k) os << (k ? " > " : "") << r.runs[k].sup_error;
  return os.str();
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

ExperimentConfig experiment(const std::string& id, int dim, double lo, double hi, double horizon, std::vector<double> eps,
                            const std::string& driver, const std::string& initial, OracleKind oracle) {
  ExperimentConfig c;
  c.id = id;
  c.dim = dim;
  c.window = Window::cube(dim, lo, hi);
  c.horizon = horizon;
  c.epsilons = std::move(eps);
  c.driver.name = driver;
  c.initial = initial;
  c.oracle = oracle;
  return c;
}

// Midpoint of the grid minimizers of sum |y - c_j| on [min c - 1, max c + 1].
double brute_force_median(const std::vector<double>& c) {
  const double lo = *std::min_element(c.begin(), c.end()) - 1.0;
  const double hi = *std::max_element(c.begin(), c.end()) + 1.0;
  const int n = static_cast<int>(std::ceil((hi - lo) / 1e-3));
  double best = 1e300, first = lo, last = lo;
  for (int i = 0; i <= n; ++i) {
    const double y = lo + 1e-3 * i;
    double s = 0.0;
    for (double v : c) s += std::abs(y - v);
    if (s < best - 1e-9) {
      best = s;
      first = last = y;
    } else if (s <= best + 1e-9) {
      last = y;
    }
  }
  return 0.5 * (first + last);
}

Outcome scheme_axioms() {
  int checked = 0, failed = 0;
  std::string first_failure;
  for (const Driver& d : standard_drivers()) {
    for (const PropertyResult& p : scheme_axiom_properties(rule_for(d), 20261018, 1000, 1e-10)) {
      ++checked;
      if (!p.passed) {
        ++failed;
        if (first_failure.empty()) first_failure = p.subject + " " + p.property + ": " + p.detail;
      }
    }
  }
  std::ostringstream os;
  os << checked << " axiom checks over " << standard_drivers().size() << " driver instances, " << failed << " failed";
  if (!first_failure.empty()) os << " (" << first_failure << ")";
  return {failed == 0, os.str()};
}

Outcome median_equivalence() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  int characterization_failures = 0;
  for (int dim : {2, 3}) {
    for (int n = 0; n < 1000; ++n) {
      std::vector<double> c(2 * dim);
      for (double& v : c) v = u(rng);
      const double m = median_midpoint(c);
      worst = std::max(worst, std::abs(m - brute_force_median(c)));
      // Minimizer characterization: at most d values strictly on each side.
      const auto below = std::count_if(c.begin(), c.end(), [&](double v) { return v < m; });
      const auto above = std::count_if(c.begin(), c.end(), [&](double v) { return v > m; });
      if (below > dim || above > dim) ++characterization_failures;
    }
  }
  int sandwich_failures = 0;
  std::uniform_real_distribution<double> g(-2.0, 2.0);
  for (int dim : {2, 3}) {
    const Driver med = Driver::median(dim);
    for (int n = 0; n < 1000; ++n) {
      std::vector<double> p(dim), diag(dim), y(dim);
      for (int i = 0; i < dim; ++i) {
        p[i] = g(rng);
        diag[i] = g(rng);
        y[i] = g(rng);
      }
      const TestFunction q = TestFunction::quadratic(p, Matrix::diagonal(diag));
      for (double eps : {1e-2, 1e-3, 1e-4})
        if (!sandwich_check(med, q, y, eps)) ++sandwich_failures;
    }
  }
  std::ostringstream os;
  os << "max |median - brute force| = " << worst << " (tol 1e-3) over 2000 tuples; characterization failures "
     << characterization_failures << "; sandwich failures " << sandwich_failures << " of 6000";
  return {worst <= 1e-3 && characterization_failures == 0 && sandwich_failures == 0, os.str()};
}

Outcome hyperbolic_match() {
  const std::vector<double> eps = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  bool ok = true;
  std::ostringstream os;
  for (const std::string drv : {"max", "pospart"})
    for (int d : {1, 2}) {
      ExperimentConfig c = experiment(drv + "_d" + std::to_string(d), d, -2.0, 2.0, 1.0, eps, drv, "tent", OracleKind::HopfLax);
      const ConvergenceReport r = run_experiment(c);
      const bool pass = strictly_decreasing(r.errors()) && r.errors().back() <= 0.05;
      ok = ok && pass;
      os << (os.tellp() > 0 ? "; " : "") << drv << " d=" << d << " " << errors_text(r) << (pass ? "" : " [fail]");
    }
  os << " (final tol 0.05)";
  return {ok, os.str()};
}

Outcome consistency_sweeps() {
  ConsistencyBatchOptions opt;
  opt.epsilons = {1e-2, 1e-4, 1e-6};
  opt.quadratics = 20;
  opt.singular_probes = 20;
  opt.sweep.tolerance = 5e-3;
  opt.sweep.envelope_tolerance = 1e-6;
  const std::vector<Driver> drivers = {Driver::argmin(2, Potential::power_even(4)),
                                       Driver::argmin(2, Potential::fractional_power(0.5)), Driver::median(2),
                                       Driver::rsos(2), Driver::smooth_phi(kpz_phi(1))};
  bool ok = true;
  std::ostringstream os;
  for (const Driver& d : drivers) {
    const ConsistencyBatch b = run_consistency_batch(d, opt, 20261018);
    double worst = 0.0;
    int off = 0, on = 0;
    for (const ConsistencyReport& r : b.reports) {
      if (r.target.singular) {
        ++on;
      } else {
        ++off;
        worst = std::max(worst, r.errors.back());
      }
    }
    const bool pass = b.passed && off == 20 && worst <= 5e-3;
    ok = ok && pass;
    os << (os.tellp() > 0 ? "; " : "") << d.name() << " " << off << " off + " << on << " on singular set, worst final "
       << worst << (pass ? "" : " [fail]");
  }
  return {ok, os.str()};
}

Outcome finite_sandwich() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<Driver> drivers = {Driver::argmin(2, Potential::power_even(4)), Driver::argmin(2, Potential::power_even(6)),
                                       Driver::argmin(2, Potential::fractional_power(0.5)), Driver::median(2), Driver::rsos(2)};
  int checks = 0, failed = 0;
  for (int n = 0; n < 1000; ++n) {
    Matrix X(2);
    X(0, 0) = u(rng);
    X(1, 1) = u(rng);
    X(0, 1) = X(1, 0) = u(rng);
    const TestFunction q = TestFunction::quadratic({u(rng), u(rng)}, X);
    const std::vector<double> y = {u(rng), u(rng)};
    for (double eps : {1e-2, 1e-3, 1e-4})
      for (const Driver& d : drivers) {
        ++checks;
        if (!sandwich_check(d, q, y, eps)) ++failed;
      }
  }
  std::ostringstream os;
  os << failed << " failures in " << checks << " containment checks (" << drivers.size() << " argmin drivers)";
  return {failed == 0, os.str()};
}

Outcome crystalline_heat() {
  ExperimentConfig c = experiment("rsos_heat", 2, -std::numbers::pi, std::numbers::pi, 0.5, {1.0 / 16, 1.0 / 64, 1.0 / 256},
                                  "rsos", "cos_x1", OracleKind::SeparableHeat);
  c.diffusivity = 0.5;
  const ConvergenceReport r = run_experiment(c);
  return {strictly_decreasing(r.errors()) && r.errors().back() <= 0.05, errors_text(r) + " (final tol 0.05)"};
}

Outcome median_freezing() {
  const Driver med = Driver::median(2);
  const InitialData u0 = tanh_x1_data();
  const Window w = Window::cube(2, -2.0, 2.0);
  std::int64_t changed = 0, sites = 0;
  double worst_sample = 0.0;
  for (double eps : {1.0 / 16, 1.0 / 64, 1.0 / 256}) {
    const std::int64_t steps = time_index(1.0, eps);
    const HeightField f0 = init_field(u0, w, steps, eps, ScalingMode::parabolic());
    HeightField f = f0;
    for (std::int64_t s = 0; s < steps; ++s) {
      f = step(f, med);
      f.for_each_site([&](std::span<const std::int64_t> site, double& v) {
        ++sites;
        if (v != f0.at(site)) ++changed;
      });
    }
    const auto pts = sample_grid(w, 33);
    const std::vector<double> times = default_times(1.0);
    const OracleTable s = simulate_samples(med, u0, w, 1.0, eps, ScalingMode::parabolic(), pts, times, kDefaultResourceCap);
    const double h = std::sqrt(eps);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const std::vector<double> fx = {h * std::floor(pts[j][0] / h), h * std::floor(pts[j][1] / h)};
      for (std::size_t k = 0; k < times.size(); ++k) worst_sample = std::max(worst_sample, std::abs(s[k][j] - u0(fx)));
    }
  }
  std::ostringstream os;
  os << changed << " changed of " << sites << " interior site updates; max |u^eps - floor-sampled u0| = " << worst_sample;
  return {changed == 0 && worst_sample == 0.0, os.str()};
}

Outcome smooth_cross_validation() {
  ExperimentConfig c = experiment("kpz_fd", 1, -2.0, 2.0, 0.5, {1.0 / 64, 1.0 / 256, 1.0 / 1024, 1.0 / 4096}, "smooth_phi",
                                  "bump", OracleKind::FdCross);
  c.driver.phi = "kpz";
  const ConvergenceReport r = run_experiment(c);
  const bool cross = strictly_decreasing(r.errors()) && r.errors().back() <= 0.03;

  const SmoothAH heat{Matrix::diagonal({0.25}), Matrix(1)};
  const FdGrid grid{1, -std::numbers::pi, std::numbers::pi, 256};
  const std::vector<double> t = {0.5};
  const FdSolution s = fd_cross_solver(heat, cos_x1_data(), grid, t)[0];
  double heat_err = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double x = grid.lo + grid.spacing() * static_cast<double>(i);
    heat_err = std::max(heat_err, std::abs(s.values[i] - separable_heat_oracle(cos_x1_data(), 0.25, x, 0.5)));
  }
  std::ostringstream os;
  os << "driver vs fd " << errors_text(r) << " (final tol 0.03); fd vs heat oracle " << heat_err << " (tol 1e-3)";
  return {cross && heat_err <= 1e-3, os.str()};
}

Outcome self_convergence_fallback() {
  const std::vector<double> eps = {1.0 / 16, 1.0 / 64, 1.0 / 256};
  bool ok = true;
  std::ostringstream os;
  for (const Driver& d : {Driver::argmin(2, Potential::power_even(4)), Driver::argmin(2, Potential::fractional_power(0.5))}) {
    const ConvergenceReport r = self_convergence(d, linear_plus_bump_data(), eps, Window::cube(2, -2.0, 2.0), 1.0);
    const bool pass = strictly_decreasing(r.errors());
    ok = ok && pass;
    os << (os.tellp() > 0 ? "; " : "") << d.name() << " " << errors_text(r) << (pass ? "" : " [fail]");
  }
  return {ok, os.str()};
}

}  // namespace

int main() {
  criterion(1, "scheme axioms", 10, scheme_axioms);
  criterion(2, "median oracle equivalence", 30, median_equivalence);
  criterion(3, "hyperbolic oracle match", 120, hyperbolic_match);
  criterion(4, "consistency sweeps", 60, consistency_sweeps);
  criterion(5, "finite-eps sandwich", 60, finite_sandwich);
  criterion(6, "crystalline heat match", 300, crystalline_heat);
  criterion(7, "median freezing", 60, median_freezing);
  criterion(8, "smooth-Phi cross-validation", 120, smooth_cross_validation);
  criterion(9, "self-convergence fallback", 300, self_convergence_fallback);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
