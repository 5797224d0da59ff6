#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "growthlab/drivers.hpp"

namespace growthlab {

struct PropertyResult {
  std::string module;
  std::string property;
  std::string subject;
  bool passed = false;
  std::string detail;
};

using GrowthRule = std::function<double(double, std::span<const double>)>;

/// A rule under test plus the probe regime it is claimed for.
struct RuleUnderTest {
  std::string name;
  int dim = 2;
  GrowthRule rule;
  /// Neighbour offsets from the centre are drawn in [-spread, spread]; the
  /// smooth-Phi driver is only monotone near zero differences.
  double spread = 5.0;
};

RuleUnderTest rule_for(const Driver& driver);

/// phi(0)=0, equivariance, monotonicity and contraction on `probes` random probes.
std::vector<PropertyResult> scheme_axiom_properties(const RuleUnderTest& rule, std::uint64_t seed, int probes,
                                                    double tolerance);

/// The seven driver instances exercised by the suites (d = 2, KPZ in d = 1).
std::vector<Driver> standard_drivers();

/// Every module's property checks with the given seed.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed, int probes = 1000);

std::string format_property_table(std::span<const PropertyResult> results);

}  // namespace growthlab
