#include "growthlab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "growthlab/consistency.hpp"
#include "growthlab/error.hpp"
#include "growthlab/lattice.hpp"
#include "growthlab/limit_operators.hpp"
#include "growthlab/oracles.hpp"
#include "growthlab/potentials.hpp"

namespace growthlab {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

PropertyResult result(std::string module, std::string property, std::string subject, bool passed, std::string detail) {
  return {std::move(module), std::move(property), std::move(subject), passed, std::move(detail)};
}

}  // namespace

RuleUnderTest rule_for(const Driver& driver) {
  RuleUnderTest r;
  r.name = driver.name();
  r.dim = driver.dim();
  r.rule = [driver](double c, std::span<const double> n) { return driver.apply(c, n); };
  // KPZ is monotone only for small differences; keep probes inside that regime.
  if (driver.kind() == DriverKind::SmoothPhi &&
      driver.phi_spec()->certified != MonotonicityCertificate::Held::Global)
    r.spread = 0.125;
  return r;
}

std::vector<PropertyResult> scheme_axiom_properties(const RuleUnderTest& rule, std::uint64_t seed, int probes,
                                                    double tolerance) {
  const std::string mod = "growth_drivers";
  const int n = 2 * rule.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> base(-10.0, 10.0), off(-rule.spread, rule.spread), bump(0.0, 2.0 * rule.spread);
  std::uniform_int_distribution<int> which(0, n);
  std::vector<double> nb(n), nb2(n);
  std::vector<PropertyResult> out;

  const std::vector<double> zero(n, 0.0);
  const double z = std::abs(rule.rule(0.0, zero));
  out.push_back(result(mod, "phi(0)=0", rule.name, z <= 1e-14, "|phi(0)| = " + sci(z)));

  double eq = 0.0, mono = 0.0, contr = 0.0;
  for (int k = 0; k < probes; ++k) {
    const double c = base(rng);
    for (double& v : nb) v = c + off(rng);
    const double f = rule.rule(c, nb);

    const double kappa = base(rng);
    for (int a = 0; a < n; ++a) nb2[a] = nb[a] + kappa;
    eq = std::max(eq, std::abs(rule.rule(c + kappa, nb2) - (f + kappa)));

    // Raise one input by a nonnegative bump.
    const int i = which(rng);
    const double b = bump(rng);
    nb2 = nb;
    double c2 = c;
    if (i == n) c2 += b;
    else nb2[i] += b;
    mono = std::max(mono, f - rule.rule(c2, nb2));

    // Coordinatewise perturbation of every input.
    c2 = c + off(rng);
    double dist = std::abs(c2 - c);
    for (int a = 0; a < n; ++a) {
      nb2[a] = nb[a] + off(rng);
      dist = std::max(dist, std::abs(nb2[a] - nb[a]));
    }
    contr = std::max(contr, std::abs(rule.rule(c2, nb2) - f) - dist);
  }
  out.push_back(result(mod, "equivariance", rule.name, eq <= tolerance, "max deviation " + sci(eq)));
  out.push_back(result(mod, "monotonicity", rule.name, mono <= tolerance, "max decrease " + sci(std::max(0.0, mono))));
  out.push_back(result(mod, "contraction", rule.name, contr <= tolerance, "max excess " + sci(std::max(0.0, contr))));
  return out;
}

std::vector<Driver> standard_drivers() {
  return {Driver::max_neighbor(2),
          Driver::pospart_average(2),
          Driver::smooth_phi(kpz_phi(1)),
          Driver::argmin(2, Potential::power_even(4)),
          Driver::argmin(2, Potential::fractional_power(0.5)),
          Driver::median(2),
          Driver::rsos(2)};
}

namespace {

std::vector<PropertyResult> driver_suite(std::uint64_t seed, int probes) {
  const std::string mod = "growth_drivers";
  std::vector<PropertyResult> out;
  for (const Driver& d : standard_drivers()) {
    auto r = scheme_axiom_properties(rule_for(d), seed, probes, 1e-10);
    out.insert(out.end(), r.begin(), r.end());
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> val(-5.0, 5.0), spread(0.0, 3.0);
  int char_fail = 0, sandwich_fail = 0, custom_fail = 0, flat_fail = 0;
  const Potential abs_custom = Potential::custom(
      "abs", [](double y) { return std::abs(y); }, [](double y) { return y >= 0.0 ? 1.0 : -1.0; });
  const Potential flat_custom = Potential::custom(
      "flatwell(1)", [](double y) { const double e = std::max(0.0, std::abs(y) - 1.0); return e * e; },
      [](double y) { return 2.0 * std::copysign(std::max(0.0, std::abs(y) - 1.0), y); });
  std::uniform_real_distribution<double> small(-1.0, 1.0);
  for (int k = 0; k < probes; ++k) {
    const int d = 2 + k % 2;
    std::vector<double> a(d), c(2 * d);
    for (int i = 0; i < d; ++i) {
      a[i] = val(rng);
      const double b = spread(rng);
      c[2 * i] = a[i] + b;
      c[2 * i + 1] = a[i] - b;
    }
    const double m = median_midpoint(c);
    int above = 0, below = 0;
    for (double v : c) {
      above += v >= m;
      below += v <= m;
    }
    char_fail += above < d || below < d;
    sandwich_fail += m < *std::min_element(a.begin(), a.end()) || m > *std::max_element(a.begin(), a.end());
    custom_fail += std::abs(generic_convex_argmin(abs_custom, c) - m) > 1e-9;
    std::vector<double> s(2 * d);
    for (double& v : s) v = small(rng);  // within [-a, a] with a = 1
    flat_fail += std::abs(generic_convex_argmin(flat_custom, s) - rsos_midpoint(s)) > 1e-9;
  }
  out.push_back(result(mod, "median characterization", "median", char_fail == 0, std::to_string(char_fail) + " failures"));
  out.push_back(result(mod, "median sandwich", "median", sandwich_fail == 0, std::to_string(sandwich_fail) + " failures"));
  out.push_back(result(mod, "generic argmin = median", "custom |y|", custom_fail == 0, std::to_string(custom_fail) + " failures"));
  out.push_back(result(mod, "generic argmin = rsos", "custom flat well", flat_fail == 0, std::to_string(flat_fail) + " failures"));

  // Argmin optimality against random points of the bracket.
  const std::vector<std::pair<std::string, Potential>> pots = {
      {"power(k=4)", Potential::power_even(4)},
      {"fractional(0.5)", Potential::fractional_power(0.5)},
      {"abs", Potential::absolute_value()},
      {"flatwell(1)", Potential::flat_well(1.0)}};
  for (const auto& [name, pot] : pots) {
    const Driver drv = Driver::argmin(2, pot);
    double worst = 0.0;
    for (int k = 0; k < std::max(1, probes / 10); ++k) {
      std::vector<double> c(4);
      for (double& v : c) v = val(rng);
      const double y = drv.increment(c);
      const double fy = total_energy(pot, y, c);
      std::uniform_real_distribution<double> in(*std::min_element(c.begin(), c.end()), *std::max_element(c.begin(), c.end()));
      for (int t = 0; t < 100; ++t) worst = std::max(worst, fy - total_energy(pot, in(rng), c));
    }
    out.push_back(result(mod, "argmin optimality", name, worst <= 1e-9, "max excess " + sci(std::max(0.0, worst))));
  }
  return out;
}

std::vector<PropertyResult> operator_suite(std::uint64_t seed) {
  const std::string mod = "limit_operators";
  std::vector<PropertyResult> out;
  std::mt19937_64 rng(seed + 17);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int d = 2;
  std::vector<LimitOperator> ops = {LimitOperator::hj_max(d),           LimitOperator::hj_pospart(d),
                                    LimitOperator::smooth(smooth_limit_operator(kpz_phi(d))),
                                    LimitOperator::weighted_power(d, 4), LimitOperator::weighted_fractional(d, 0.5),
                                    LimitOperator::median(d),           LimitOperator::crystalline(d)};
  auto random_sym = [&] {
    Matrix X(d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) X(i, j) = X(j, i) = unit(rng);
    return X;
  };
  for (const LimitOperator& op : ops) {
    double worst = 0.0, bound_excess = 0.0;
    int evaluated = 0;
    for (int k = 0; k < 500; ++k) {
      std::vector<double> p(d);
      for (double& v : p) v = 2.0 * unit(rng);
      if (op.singular(p)) continue;
      const Matrix X = random_sym();
      // P = g g^T is positive semidefinite.
      std::vector<double> g(d);
      for (double& v : g) v = unit(rng);
      Matrix P(d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) P(i, j) = g[i] * g[j];
      worst = std::max(worst, op.evaluate(X, p).value() - op.evaluate(X + P, p).value());
      if (op.kind() == OperatorKind::WeightedPower || op.kind() == OperatorKind::WeightedFractional) {
        const Envelope e = envelopes_weighted(X);
        const double f = op.evaluate(X, p).value();
        bound_excess = std::max({bound_excess, f - e.upper, e.lower - f});
      }
      ++evaluated;
    }
    out.push_back(result(mod, "degenerate ellipticity", op.name(), worst <= 1e-12 && evaluated > 0,
                         std::to_string(evaluated) + " probes, max drop " + sci(std::max(0.0, worst))));
    if (op.kind() == OperatorKind::WeightedPower || op.kind() == OperatorKind::WeightedFractional)
      out.push_back(result(mod, "weighted-average bound", op.name(), bound_excess <= 0.0,
                           "max excess " + sci(std::max(0.0, bound_excess))));
  }

  // Partition exhaustiveness, including exact ties.
  int bad = 0;
  std::uniform_int_distribution<int> pick(0, 3);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> p(3);
    for (double& v : p) v = pick(rng) == 0 ? 0.0 : std::round(4.0 * unit(rng)) / 2.0;
    for (Orientation o : {Orientation::MinCoordinates, Orientation::MaxCoordinates}) {
      const PartitionLabel l = classify_partition(p, o);
      if (l.A.empty()) ++bad;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const bool in = std::find(l.A.begin(), l.A.end(), static_cast<int>(i)) != l.A.end();
        for (std::size_t j = 0; j < p.size(); ++j) {
          const bool jin = std::find(l.A.begin(), l.A.end(), static_cast<int>(j)) != l.A.end();
          if (in && jin && std::abs(p[i]) != std::abs(p[j])) ++bad;
          if (in && !jin && (o == Orientation::MinCoordinates ? std::abs(p[i]) >= std::abs(p[j]) : std::abs(p[i]) <= std::abs(p[j]))) ++bad;
        }
      }
    }
  }
  out.push_back(result(mod, "partition exhaustiveness", "V_A", bad == 0, std::to_string(bad) + " violations"));

  // Envelope attainment along gradient sequences inside V_i, i in A.
  int env_bad = 0;
  for (int k = 0; k < 200; ++k) {
    const Matrix X = random_sym();
    const double m = 0.5 + std::abs(unit(rng));
    const std::vector<double> p = {m, -m};
    for (int med = 0; med < 2; ++med) {
      const OperatorValue env = med ? F_median(X, p) : F_crystalline(X, p);
      double hi = -1e300, lo = 1e300;
      for (int i = 0; i < 2; ++i) {
        std::vector<double> q = p;
        // Shrink (median) or grow (crystalline) coordinate i slightly so that V_i holds.
        q[i] *= med ? 1.0 - 1e-9 : 1.0 + 1e-9;
        const double v = (med ? F_median(X, q) : F_crystalline(X, q)).value();
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
      env_bad += hi != env.upper || lo != env.lower;
    }
  }
  out.push_back(result(mod, "envelope attainment", "median, crystalline", env_bad == 0, std::to_string(env_bad) + " mismatches"));

  // Hopf-Lax value is nondecreasing in t.
  int hl_bad = 0;
  const InitialData tent = tent_data();
  for (int k = 0; k < 40; ++k) {
    const std::vector<double> x = {1.5 * unit(rng), 1.5 * unit(rng)};
    for (Hamiltonian h : {Hamiltonian::HJMax, Hamiltonian::HJPosPart}) {
      double prev = tent(x);
      for (double t : {0.125, 0.25, 0.5, 1.0}) {
        const double v = hopf_lax_oracle(h, tent, x, t, 1.0 / 256.0);
        hl_bad += v < prev;
        prev = v;
      }
    }
  }
  out.push_back(result(mod, "hopf-lax monotone in t", "tent", hl_bad == 0, std::to_string(hl_bad) + " decreases"));
  return out;
}

HeightField random_field(const Box& box, std::mt19937_64& rng, double amplitude) {
  HeightField f(box, 1.0 / 16.0, ScalingMode::parabolic());
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  for (double& v : f.values()) v = u(rng);
  return f;
}

double sup_diff(const HeightField& a, const HeightField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

std::vector<PropertyResult> lattice_and_transport_suite(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  std::mt19937_64 rng(seed + 101);
  for (const Driver& drv : standard_drivers()) {
    const RuleUnderTest rut = rule_for(drv);
    // Smooth-field amplitude: keep KPZ inside its monotone regime.
    const double amp = rut.spread < 1.0 ? rut.spread / 4.0 : 2.0;
    const int d = drv.dim();
    const std::int64_t steps = 6;
    const Box inner{std::vector<std::int64_t>(d, -4), std::vector<std::int64_t>(d, 4)};

    // Light-cone exactness: a larger halo does not change the inner values.
    HeightField big = random_field(inner.grown(steps + 3), rng, amp);
    HeightField small(inner.grown(steps), big.epsilon(), big.scaling());
    small.for_each_site([&](std::span<const std::int64_t> s, double& v) { v = big.at(s); });
    HeightField a = small, b = big;
    for (std::int64_t s = 0; s < steps; ++s) {
      a = step(a, drv);
      b = step(b, drv);
    }
    bool exact = true;
    a.for_each_site([&](std::span<const std::int64_t> s, double& v) { exact = exact && v == b.at(s); });
    out.push_back(result("lattice_core", "light-cone exactness", drv.name(), exact, exact ? "bitwise equal" : "mismatch"));

    // Purity: stepping leaves the input intact and is repeatable.
    const HeightField before = small;
    const HeightField s1 = step(small, drv), s2 = step(small, drv);
    const bool pure = small == before && s1 == s2;
    out.push_back(result("lattice_core", "purity", drv.name(), pure, pure ? "input unchanged" : "input mutated"));

    // Multi-step contraction, shift equivariance and comparison.
    double contr = 0.0, shift_err = 0.0, order = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      HeightField u = random_field(inner.grown(steps), rng, amp);
      HeightField v = u, w = u, up = u;
      std::uniform_real_distribution<double> pert(-amp / 4.0, amp / 4.0), lift(0.0, amp / 4.0);
      const double kappa = 3.7;
      for (std::size_t k = 0; k < u.values().size(); ++k) {
        v.values()[k] += pert(rng);
        w.values()[k] += kappa;
        up.values()[k] += lift(rng);
      }
      const double d0 = sup_diff(u, v);
      for (std::int64_t s = 0; s < steps; ++s) {
        u = step(u, drv);
        v = step(v, drv);
        w = step(w, drv);
        up = step(up, drv);
        contr = std::max(contr, sup_diff(u, v) - d0);
        for (std::size_t k = 0; k < u.values().size(); ++k) {
          shift_err = std::max(shift_err, std::abs(w.values()[k] - u.values()[k] - kappa));
          order = std::max(order, u.values()[k] - up.values()[k]);
        }
      }
    }
    out.push_back(result("convergence_harness", "multi-step contraction", drv.name(), contr <= 1e-10,
                         "max excess " + sci(std::max(0.0, contr))));
    out.push_back(result("convergence_harness", "shift equivariance", drv.name(), shift_err <= 1e-10,
                         "max deviation " + sci(shift_err)));
    out.push_back(result("convergence_harness", "comparison transport", drv.name(), order <= 1e-10,
                         "max violation " + sci(std::max(0.0, order))));
  }

  // Floor evaluation is constant on eps-cells.
  const Driver drv = Driver::max_neighbor(2);
  const double eps = 1.0 / 8.0;
  const Trajectory traj = evolve(init_field(bump_data(), Window::cube(2, -1.0, 1.0), 4, eps, ScalingMode::hyperbolic()), drv, 4);
  int cell_bad = 0;
  std::uniform_real_distribution<double> frac(0.0, 0.999);
  for (int k = 0; k < 200; ++k) {
    const double cx = std::floor(16.0 * frac(rng)) - 8.0, cy = std::floor(16.0 * frac(rng)) - 8.0;
    const double ct = std::floor(4.0 * frac(rng));
    const std::vector<double> p1 = {(cx + frac(rng)) * eps, (cy + frac(rng)) * eps};
    const std::vector<double> p2 = {(cx + frac(rng)) * eps, (cy + frac(rng)) * eps};
    cell_bad += evaluate_scaled(traj, p1, (ct + frac(rng)) * eps) != evaluate_scaled(traj, p2, (ct + frac(rng)) * eps);
  }
  out.push_back(result("lattice_core", "floor evaluation", "max", cell_bad == 0, std::to_string(cell_bad) + " mismatches"));
  return out;
}

std::vector<PropertyResult> consistency_suite(std::uint64_t seed, int probes) {
  std::vector<PropertyResult> out;
  std::mt19937_64 rng(seed + 303);
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  for (const Driver& drv : {Driver::argmin(2, Potential::power_even(4)), Driver::argmin(2, Potential::fractional_power(0.5)),
                            Driver::median(2), Driver::rsos(2)}) {
    const LimitOperator op = limit_operator_for(drv);
    int bad = 0;
    std::uniform_real_distribution<double> at(-1.0, 1.0);
    for (int k = 0; k < probes; ++k) {
      const TestFunction phi = random_quadratic(op, rng, false);
      const std::vector<double> y = {at(rng), at(rng)};
      for (double e : eps) bad += !sandwich_check(drv, phi, y, e);
    }
    out.push_back(result("consistency_lab", "finite-eps sandwich", drv.name(), bad == 0, std::to_string(bad) + " failures"));
  }
  // Max driver on linear test functions: ratio independent of eps.
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double drift = 0.0;
  const Driver mx = Driver::max_neighbor(2);
  for (int k = 0; k < 100; ++k) {
    const TestFunction lin = TestFunction::quadratic({u(rng), u(rng)}, Matrix(2));
    const std::vector<double> y = {u(rng), u(rng)};
    double prev = consistency_ratio(mx, lin, y, 1e-2, ScalingMode::hyperbolic());
    for (double e : {1e-3, 1e-4, 1e-5}) {
      const double r = consistency_ratio(mx, lin, y, e, ScalingMode::hyperbolic());
      drift = std::max(drift, std::abs(r - prev));
      prev = r;
    }
  }
  out.push_back(result("consistency_lab", "linear ratio eps-independent", "max", drift <= 1e-10, "max drift " + sci(drift)));
  return out;
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, int probes) {
  std::vector<PropertyResult> out;
  auto add = [&](std::vector<PropertyResult> r) { out.insert(out.end(), r.begin(), r.end()); };
  add(lattice_and_transport_suite(seed));
  add(driver_suite(seed, probes));
  add(operator_suite(seed));
  add(consistency_suite(seed, std::max(1, probes / 10)));
  return out;
}

std::string format_property_table(std::span<const PropertyResult> results) {
  std::size_t w1 = 6, w2 = 8, w3 = 7;
  for (const auto& r : results) {
    w1 = std::max(w1, r.module.size());
    w2 = std::max(w2, r.property.size());
    w3 = std::max(w3, r.subject.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(w1 + 2) << "module" << std::setw(w2 + 2) << "property" << std::setw(w3 + 2) << "subject"
     << "verdict  detail\n";
  for (const auto& r : results)
    os << std::setw(w1 + 2) << r.module << std::setw(w2 + 2) << r.property << std::setw(w3 + 2) << r.subject
       << std::setw(9) << (r.passed ? "PASS" : "FAIL") << r.detail << '\n';
  return os.str();
}

}  // namespace growthlab
