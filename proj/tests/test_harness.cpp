#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "growthlab/config.hpp"
#include "growthlab/drivers.hpp"
#include "growthlab/error.hpp"
#include "growthlab/harness.hpp"
#include "growthlab/registry.hpp"

using namespace growthlab;

namespace {

const char* kMaxConfig = R"(# small max-driver run
[experiment]
id = unit_max
d = 1
window = -2, 2
horizon = 1
epsilons = 1/8, 1/16, 1/32
samples = 17

[driver]
name = max

[initial]
name = tent

[oracle]
kind = hopf_lax
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sample grid uses cell midpoints") {
  const auto pts = sample_grid(Window::cube(1, -2.0, 2.0), 4);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0][0] == -1.5);
  CHECK(pts[3][0] == 1.5);
  CHECK(sample_grid(Window::cube(2, 0.0, 1.0), 3).size() == 9);
  CHECK(default_times(2.0) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK_THROWS_AS(sample_grid(Window::cube(1, 0.0, 1.0), 0), Error);
}

TEST_CASE("sup error of identical and shifted samples") {
  const double eps = 1.0 / 16;
  const Trajectory traj = evolve(init_field(bump_data(), Window::cube(1, -1.0, 1.0), 16, eps, ScalingMode::hyperbolic()),
                                 Driver::max_neighbor(1), 16);
  const auto pts = sample_grid(Window::cube(1, -1.0, 1.0), 9);
  const std::vector<double> times = {0.0, 0.5, 1.0};
  OracleTable same(times.size()), shifted(times.size());
  for (std::size_t k = 0; k < times.size(); ++k)
    for (const auto& x : pts) {
      const double v = evaluate_scaled(traj, x, times[k]);
      same[k].push_back(v);
      shifted[k].push_back(v + 0.125);
    }
  CHECK(sup_error(traj, same, pts, times).overall == 0.0);
  const SupError s = sup_error(traj, shifted, pts, times);
  CHECK(s.overall == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(s.per_time.size() == 3);
}

TEST_CASE("rate fit on synthetic errors") {
  const std::vector<double> eps = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<double> lin, root;
  for (double e : eps) {
    lin.push_back(3.0 * e);
    root.push_back(0.7 * std::sqrt(e));
  }
  const RateFit a = rate_fit(eps, lin);
  CHECK(a.valid());
  CHECK(a.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(rate_fit(eps, root).slope == doctest::Approx(0.5).epsilon(0.05));

  std::vector<double> with_zero = lin;
  with_zero[3] = 0.0;
  const RateFit z = rate_fit(eps, with_zero);
  CHECK(z.used == 3);
  CHECK_FALSE(z.note.empty());
}

TEST_CASE("verdict rule") {
  ConvergenceReport r;
  for (double e : {0.4, 0.2, 0.1}) {
    EpsilonRun run;
    run.sup_error = e;
    r.runs.push_back(run);
  }
  assign_verdict(r, std::nullopt);
  CHECK(r.passed);
  assign_verdict(r, 0.05);
  CHECK_FALSE(r.passed);
  assign_verdict(r, 0.15);
  CHECK(r.passed);
  r.runs[2].sup_error = 0.2;
  assign_verdict(r, std::nullopt);
  CHECK_FALSE(r.passed);
}

TEST_CASE("config parsing") {
  const ConfigFile c = ConfigFile::parse(kMaxConfig);
  const ExperimentConfig e = experiment_from_config(c);
  CHECK(e.id == "unit_max");
  CHECK(e.epsilons == std::vector<double>{0.125, 0.0625, 0.03125});
  CHECK(e.samples_per_axis == 17);
  CHECK(e.oracle == OracleKind::HopfLax);
  CHECK(e.config_text == kMaxConfig);
  CHECK(parse_number("1/128") == 1.0 / 128);
  CHECK(parse_number("-2.5e-1") == -0.25);
  CHECK_THROWS_AS(parse_number("abc"), Error);

  auto message_of = [](const std::string& text) {
    try {
      experiment_from_config(ConfigFile::parse(text));
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::Config);
      return std::string(err.what());
    }
    return std::string();
  };
  const std::string base = kMaxConfig;
  CHECK(message_of(base + "[driver]\nspeed = 3\n").find("speed") != std::string::npos);
  CHECK(message_of(base + "[bogus]\nx = 1\n").find("bogus") != std::string::npos);
  CHECK(message_of("[experiment]\nd = 1\nd = 2\nepsilons = 0.1\n").find("duplicate") != std::string::npos);
  CHECK(message_of("[experiment]\nd = 1\n").find("epsilons") != std::string::npos);
  CHECK(message_of("[experiment]\nepsilons = 0.1, 0.2\n").find("decreasing") != std::string::npos);
  CHECK(message_of(base + "[oracle]\n").find("duplicate") == std::string::npos);
}

TEST_CASE("max driver experiment converges and is deterministic") {
  const ExperimentConfig e = experiment_from_config(ConfigFile::parse(kMaxConfig));
  const ConvergenceReport a = run_experiment(e);
  CHECK(a.passed);
  REQUIRE(a.runs.size() == 3);
  CHECK(a.runs[0].sup_error > a.runs[1].sup_error);
  CHECK(a.runs[1].sup_error > a.runs[2].sup_error);
  CHECK(a.scaling == "hyperbolic");

  const ConvergenceReport b = run_experiment(e);
  const auto dir = std::filesystem::temp_directory_path() / "growthlab_unit";
  std::filesystem::create_directories(dir);
  write_csv(a, (dir / "a.csv").string());
  write_csv(b, (dir / "b.csv").string());
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  auto ja = nlohmann::ordered_json::parse(report_json(a, e));
  auto jb = nlohmann::ordered_json::parse(report_json(b, e));
  CHECK(ja["config"]["text"].get<std::string>() == kMaxConfig);
  CHECK(ja["verdict"] == "PASS");
  ja.erase("runtime");
  jb.erase("runtime");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("experiment validation") {
  ExperimentConfig e = experiment_from_config(ConfigFile::parse(kMaxConfig));
  ExperimentConfig capped = e;
  capped.resource_cap = 10.0;
  try {
    run_experiment(capped);
    FAIL("expected a resource error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Resource);
  }

  ExperimentConfig wrong = e;
  wrong.driver.name = "median";
  CHECK_THROWS_AS(run_experiment(wrong), Error);

  ExperimentConfig heat = e;
  heat.oracle = OracleKind::SeparableHeat;
  CHECK_THROWS_AS(run_experiment(heat), Error);
}

TEST_CASE("median driver freezes a monotone profile") {
  ExperimentConfig e;
  e.id = "median_freeze";
  e.dim = 2;
  e.window = Window::cube(2, -1.0, 1.0);
  e.horizon = 0.25;
  e.epsilons = {1.0 / 16, 1.0 / 64};
  e.driver.name = "median";
  e.initial = "tanh_x1";
  e.oracle = OracleKind::SelfConvergence;
  e.samples_per_axis = 9;
  const Driver drv = make_driver(e.driver, 2);
  const InitialData u0 = tanh_x1_data();
  const auto pts = sample_grid(e.window, 9);
  const std::vector<double> times = {0.0, 0.125, 0.25};
  for (double eps : e.epsilons) {
    const OracleTable s = simulate_samples(drv, u0, e.window, e.horizon, eps, ScalingMode::parabolic(), pts, times, 5e9);
    const double h = std::sqrt(eps);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const std::vector<double> fx = {h * std::floor(pts[j][0] / h), h * std::floor(pts[j][1] / h)};
      for (std::size_t k = 0; k < times.size(); ++k) REQUIRE(s[k][j] == u0(fx));
    }
  }
}

TEST_CASE("self-convergence contract") {
  const std::vector<double> ratio2 = {1.0 / 8, 1.0 / 16, 1.0 / 32};
  CHECK_THROWS_AS(self_convergence(Driver::max_neighbor(1), tent_data(), ratio2, Window::cube(1, -1.0, 1.0), 0.5), Error);
  const std::vector<double> ratio4 = {1.0 / 4, 1.0 / 16, 1.0 / 64};
  const ConvergenceReport r =
      self_convergence(Driver::max_neighbor(1), tent_data(), ratio4, Window::cube(1, -1.0, 1.0), 0.5);
  CHECK(r.runs.size() == 2);
  CHECK(r.runs[0].reference_epsilon.value() == 1.0 / 16);
}
