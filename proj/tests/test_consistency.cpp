#include <doctest.h>

#include <cmath>
#include <random>

#include "growthlab/consistency.hpp"
#include "growthlab/drivers.hpp"
#include "growthlab/error.hpp"
#include "growthlab/limit_operators.hpp"

using namespace growthlab;

namespace {

const std::vector<double> kEps = {1e-2, 1e-4, 1e-6};

double last_ratio(const Driver& drv, const TestFunction& phi, std::span<const double> x) {
  return consistency_sweep(drv, phi, x, kEps).ratios.back();
}

}  // namespace

TEST_CASE("test functions match their analytic derivatives") {
  const std::vector<double> at = {0.3, -0.7};
  CHECK(self_check(TestFunction::quadratic({1.0, 2.0}, Matrix::diagonal({0.5, -1.5})), at));
  CHECK(self_check(TestFunction::cosine_product(2), at));
  CHECK(self_check(TestFunction::bump(2), at));
  const std::vector<double> at3 = {0.1, 0.2, -0.4};
  CHECK(self_check(TestFunction::cosine_product(3), at3));
}

TEST_CASE("max driver ratio on linear functions is exact") {
  const Driver drv = Driver::max_neighbor(2);
  const TestFunction lin = TestFunction::quadratic({1.0, -2.0}, Matrix(2));
  const std::vector<double> y = {0.4, -0.9};
  for (double eps : {0.5, 0.1, 1e-3, 1e-6})
    CHECK(consistency_ratio(drv, lin, y, eps, ScalingMode::hyperbolic()) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("argmin ratios converge to the weighted operators") {
  const std::vector<double> x = {0.0, 0.0};
  const double alpha = 0.7, beta = -1.3;
  const TestFunction q = TestFunction::quadratic({1.0, 2.0}, Matrix::diagonal({alpha, beta}));

  const double power = last_ratio(Driver::argmin(2, Potential::power_even(4)), q, x);
  CHECK(power == doctest::Approx((alpha + 4.0 * beta) / 10.0).epsilon(5e-3));

  const double frac = last_ratio(Driver::argmin(2, Potential::fractional_power(0.5)), q, x);
  CHECK(frac == doctest::Approx((alpha + std::sqrt(2.0) * beta) / (2.0 * (1.0 + std::sqrt(2.0)))).epsilon(5e-3));

  const TestFunction axis = TestFunction::quadratic({1.0, 0.0}, Matrix::diagonal({2.4, -0.6}));
  CHECK(last_ratio(Driver::rsos(2), axis, x) == doctest::Approx(1.2).epsilon(5e-3));

  const TestFunction med = TestFunction::quadratic({1.0, 3.0}, Matrix::diagonal({1.8, 5.0}));
  CHECK(last_ratio(Driver::median(2), med, x) == doctest::Approx(0.9).epsilon(5e-3));

  const ConsistencyReport r = consistency_sweep(Driver::argmin(2, Potential::power_even(4)), q, x, kEps);
  CHECK(r.passed);
  CHECK_FALSE(r.target.singular);
}

TEST_CASE("argmin ratios at zero gradient stay within the envelopes") {
  const std::vector<double> x = {0.0, 0.0};
  const TestFunction flat = TestFunction::quadratic({0.0, 0.0}, Matrix::diagonal({-1.0, 3.0}));
  for (const Driver& drv : {Driver::argmin(2, Potential::power_even(4)), Driver::argmin(2, Potential::fractional_power(0.5)),
                            Driver::median(2), Driver::rsos(2)}) {
    const ConsistencyReport r = consistency_sweep(drv, flat, x, kEps);
    CHECK_MESSAGE(r.passed, drv.name() << ": " << r.verdict_reason);
    CHECK(r.target.singular);
    for (double v : r.ratios) CHECK(v >= -0.5 - 1e-6);
    for (double v : r.ratios) CHECK(v <= 1.5 + 1e-6);
  }
}

TEST_CASE("sandwich bounds hold exactly") {
  const Driver k4 = Driver::argmin(2, Potential::power_even(4));
  const TestFunction constant = TestFunction::quadratic({0.0, 0.0}, Matrix(2));
  const std::vector<double> y = {0.2, 0.1};
  CHECK(sandwich_check(k4, constant, y, 1e-2));
  CHECK(consistency_ratio(k4, constant, y, 1e-2, ScalingMode::parabolic()) == 0.0);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<Driver> drivers = {k4, Driver::argmin(2, Potential::fractional_power(0.5)), Driver::median(2),
                                       Driver::rsos(2)};
  int checked = 0;
  for (int n = 0; n < 1000; ++n) {
    const TestFunction q = TestFunction::quadratic({u(rng), u(rng)}, Matrix::diagonal({u(rng), u(rng)}));
    const std::vector<double> at = {u(rng), u(rng)};
    for (double eps : {1e-2, 1e-3, 1e-4})
      for (const Driver& d : drivers) {
        REQUIRE_MESSAGE(sandwich_check(d, q, at, eps), d.name() << " " << q.name() << " eps " << eps);
        ++checked;
      }
  }
  CHECK(checked == 12000);
}

TEST_CASE("random quadratics respect the singular-set request") {
  std::mt19937_64 rng(5);
  const LimitOperator w = LimitOperator::weighted_power(2, 4);
  const LimitOperator m = LimitOperator::median(2);
  const std::vector<double> origin = {0.0, 0.0};
  for (int i = 0; i < 50; ++i) {
    CHECK_FALSE(w.singular(random_quadratic(w, rng, false).gradient(origin)));
    CHECK(w.singular(random_quadratic(w, rng, true).gradient(origin)));
    CHECK_FALSE(m.singular(random_quadratic(m, rng, false).gradient(origin)));
    CHECK(m.singular(random_quadratic(m, rng, true).gradient(origin)));
  }
  CHECK_THROWS_AS(random_quadratic(LimitOperator::hj_max(2), rng, true), Error);
}

TEST_CASE("consistency batches pass for the argmin family") {
  ConsistencyBatchOptions opt;
  opt.quadratics = 10;
  opt.singular_probes = 10;
  for (const Driver& d : {Driver::argmin(2, Potential::power_even(4)), Driver::argmin(2, Potential::fractional_power(0.5)),
                          Driver::median(2), Driver::rsos(2)}) {
    const ConsistencyBatch b = run_consistency_batch(d, opt, 0);
    CHECK_MESSAGE(b.passed, d.name() << " failures " << b.failures);
    CHECK(b.reports.size() == 20);
  }
}
