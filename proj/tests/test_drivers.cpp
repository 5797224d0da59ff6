#include <doctest.h>

#include <cmath>
#include <random>

#include "growthlab/drivers.hpp"
#include "growthlab/error.hpp"

using namespace growthlab;

TEST_CASE("hyperbolic drivers") {
  const std::vector<double> same = {3.0, 3.0, 3.0, 3.0};
  CHECK(max_driver(3.0, same) == 3.0);
  const std::vector<double> n = {1.0, -2.0, 0.5, -0.5};
  CHECK(max_driver(0.0, n) == 1.0);
  const std::vector<double> below = {-1.0, -2.0};
  CHECK(pospart_driver(0.0, below) == 0.0);
  const std::vector<double> pm = {2.0, -2.0};
  CHECK(pospart_driver(0.0, pm) == 1.0);
  CHECK(Driver::max_neighbor(2).apply(0.0, n) == 1.0);
}

TEST_CASE("smooth Phi driver") {
  const SmoothPhiSpec heat = linear_average_phi(2);
  const std::vector<double> c4 = {1.5, 1.5, 1.5, 1.5};
  CHECK(smooth_phi_driver(heat, 1.5, c4) == 1.5);
  const SmoothPhiSpec kpz = kpz_phi(1);
  const std::vector<double> pm = {1.0, -1.0};
  CHECK(smooth_phi_driver(kpz, 0.0, pm) == 0.5);
  CHECK(Driver::smooth_phi(kpz).apply(0.0, pm) == 0.5);
}

TEST_CASE("monotonicity certificates") {
  const MonotonicityCertificate heat_global = check_monotonicity(linear_average_phi(1), MonotonicityMode::Global);
  CHECK(heat_global.holds);
  CHECK(heat_global.margin == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_FALSE(check_monotonicity(linear_average_phi(1), MonotonicityMode::AtZero).holds);

  SmoothPhiSpec kpz = kpz_phi(1);
  const MonotonicityCertificate kg = check_monotonicity(kpz, MonotonicityMode::Global);
  CHECK_FALSE(kg.holds);
  CHECK(kg.violation_at.size() == 2);
  const MonotonicityCertificate kz = check_monotonicity(kpz, MonotonicityMode::AtZero);
  CHECK(kz.holds);
  CHECK(kz.margin == doctest::Approx(0.25).epsilon(1e-6));  // min(1 - 1/2, 1/4)
  CHECK(certify(kpz) == MonotonicityCertificate::Held::AtZero);

  SmoothPhiSpec bad;
  bad.name = "negative";
  bad.dim = 1;
  bad.phi = [](std::span<const double> v) { return -0.1 * v[0] - 0.1 * v[1]; };
  const MonotonicityCertificate b = check_monotonicity(bad, MonotonicityMode::AtZero);
  CHECK_FALSE(b.holds);
  CHECK(b.margin < 0.0);
}

TEST_CASE("smooth Phi must be symmetric at zero") {
  SmoothPhiSpec asym;
  asym.name = "asym";
  asym.dim = 1;
  asym.phi = [](std::span<const double> v) { return 0.3 * v[0] + 0.1 * v[1]; };
  CHECK_THROWS_AS(Driver::smooth_phi(asym), Error);
}

TEST_CASE("argmin closed forms") {
  const std::vector<double> mixed = {0.3, -1.2, 4.0, 2.5};
  CHECK(argmin_power(2, mixed) == doctest::Approx(1.4).epsilon(1e-12));
  const std::vector<double> half = {0.0, 0.0, 1.0, 1.0};
  CHECK(std::abs(argmin_power(4, half) - 0.5) <= 1e-12);
  // Root of y^3 + (y-1)^3 + (y-2)^3 + (y-5)^3 (high-precision reference).
  const std::vector<double> skew = {0.0, 1.0, 2.0, 5.0};
  CHECK(std::abs(argmin_power(4, skew) - 2.4214424777194803) <= 1e-12);
  CHECK(std::abs(argmin_fracpower(0.5, skew) - 2.2025797085260678) <= 1e-12);

  const std::vector<double> flat = {0.7, 0.7, 0.7, 0.7};
  CHECK(argmin_fracpower(0.5, flat) == 0.7);
  const std::vector<double> sym = {-1.0, 1.0};
  CHECK(std::abs(argmin_fracpower(0.3, sym)) <= 1e-12);
  const std::vector<double> pairs = {0.0, 0.0, 3.0, 3.0};
  CHECK(std::abs(argmin_fracpower(0.5, pairs) - 1.5) <= 1e-12);

  const std::vector<double> fives = {5.0, 5.0, 5.0, 5.0};
  CHECK(median_midpoint(fives) == 5.0);
  const std::vector<double> two = {0.0, 2.0};
  CHECK(median_midpoint(two) == 1.0);
  const std::vector<double> spread = {0.0, 0.0, 4.0, 10.0};
  CHECK(median_midpoint(spread) == 2.0);
  const std::vector<double> odd = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(median_midpoint(odd), Error);

  const std::vector<double> zeros = {0.0, 0.0, 0.0, 0.0};
  CHECK(rsos_midpoint(zeros) == 0.0);
  const std::vector<double> r = {-1.0, 3.0, 0.0, 2.0};
  CHECK(rsos_midpoint(r) == 1.0);
}

TEST_CASE("median agrees with grid minimization of sum |y - c|") {
  const std::vector<double> spread = {0.0, 0.0, 4.0, 10.0};
  // The objective is flat on [0, 4]; the grid minimizers span it.
  double lo = 1e9, hi = -1e9, best = 1e300;
  for (int i = 0; i <= 12000; ++i) {
    const double y = -1.0 + 1e-3 * i;
    double s = 0.0;
    for (double c : spread) s += std::abs(y - c);
    if (s < best - 1e-9) {
      best = s;
      lo = hi = y;
    } else if (std::abs(s - best) <= 1e-9) {
      hi = y;
    }
  }
  CHECK(lo == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(hi == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(median_midpoint(spread) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
}

TEST_CASE("generic convex argmin cross-checks the closed forms") {
  const Potential sq = Potential::custom("square", [](double y) { return y * y; }, [](double y) { return 2.0 * y; });
  const Potential absv = Potential::custom("abs", [](double y) { return std::abs(y); }, [](double y) { return y >= 0.0 ? 1.0 : -1.0; });
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0), small(-0.99, 0.99);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> c(4), s(4);
    for (double& v : c) v = u(rng);
    for (double& v : s) v = small(rng);
    double mean = 0.0;
    for (double v : c) mean += v / 4.0;
    REQUIRE(std::abs(generic_convex_argmin(sq, c) - mean) <= 1e-9);
    REQUIRE(std::abs(generic_convex_argmin(absv, c) - median_midpoint(c)) <= 1e-9);
    REQUIRE(std::abs(generic_convex_argmin(Potential::flat_well(1.0), s) - rsos_midpoint(s)) <= 1e-9);
  }
  const MinimizingInterval iv = convex_minimizing_interval(absv, std::vector<double>{0.0, 0.0, 4.0, 10.0});
  CHECK(iv.lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(iv.hi == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("potential invariants") {
  for (const Potential& v : {Potential::power_even(2), Potential::power_even(6), Potential::fractional_power(0.5),
                             Potential::absolute_value(), Potential::flat_well(0.5)}) {
    const PotentialCheck c = check_potential(v);
    CHECK_MESSAGE((c.symmetric && c.convex && c.zero_minimum), v.name());
  }
  const Potential concave = Potential::custom("sqrt", [](double y) { return std::sqrt(std::abs(y)); },
                                              [](double y) { return y >= 0.0 ? 0.5 / std::sqrt(std::max(y, 1e-12)) : -0.5 / std::sqrt(-y); });
  CHECK_FALSE(check_potential(concave).convex);
  CHECK_THROWS_AS(Driver::argmin(2, concave), Error);
  const Potential shifted = Potential::custom("shifted", [](double y) { return (y - 1) * (y - 1); }, [](double y) { return 2 * (y - 1); });
  CHECK_FALSE(check_potential(shifted).symmetric);
  CHECK_THROWS_AS(Potential::power_even(3), Error);
  CHECK_THROWS_AS(Potential::fractional_power(1.0), Error);
  CHECK_THROWS_AS(Potential::flat_well(0.0), Error);
}

TEST_CASE("scaling detection") {
  for (int d = 1; d <= 3; ++d) {
    CHECK(detect_scaling(Driver::max_neighbor(d)).kind == ScalingKind::Hyperbolic);
    CHECK(detect_scaling(Driver::pospart_average(d)).kind == ScalingKind::Hyperbolic);
    CHECK(detect_scaling(Driver::median(d)).kind == ScalingKind::Parabolic);
    CHECK(detect_scaling(Driver::rsos(d)).kind == ScalingKind::Parabolic);
    CHECK(detect_scaling(Driver::argmin(d, Potential::power_even(4))).kind == ScalingKind::Parabolic);
    CHECK(detect_scaling(Driver::argmin(d, Potential::fractional_power(0.5))).kind == ScalingKind::Parabolic);
    CHECK(detect_scaling(Driver::argmin(d, Potential::flat_well(1.0))).kind == ScalingKind::Parabolic);
    CHECK(detect_scaling(Driver::smooth_phi(kpz_phi(d))).kind == ScalingKind::Parabolic);
    CHECK(detect_scaling(Driver::smooth_phi(linear_average_phi(d))).kind == ScalingKind::Parabolic);
  }
  const std::vector<std::vector<double>> axis_only = {{1.0, 0.0}};
  CHECK_THROWS_AS(detect_scaling(Driver::max_neighbor(2), axis_only), Error);
}
