#pragma once

#include <string>
#include <vector>

#include "growthlab/config.hpp"
#include "growthlab/drivers.hpp"
#include "growthlab/initial_data.hpp"
#include "growthlab/limit_operators.hpp"

namespace growthlab {

/// Driver by name and parameters, as written in a [driver] config section.
struct DriverSpec {
  std::string name = "max";  // max | pospart | smooth_phi | argmin | median | rsos
  std::string potential = "power";  // argmin: power | fractional | abs | flatwell
  int k = 4;
  double delta = 0.5;
  double a = 1.0;
  std::string phi = "kpz";  // smooth_phi: kpz | heat
  bool require_lipschitz = true;
};

Driver make_driver(const DriverSpec& spec, int dim);
DriverSpec driver_spec_from_config(const ConfigFile& config, const std::string& section = "driver");
std::vector<std::string> driver_key_names();

InitialData make_initial_data(const std::string& name);
LimitOperator make_operator(const std::string& name, int dim, int k = 4, double delta = 0.5);

struct RegistryEntry {
  std::string name;
  std::string description;
};

std::vector<RegistryEntry> registered_drivers();
std::vector<RegistryEntry> registered_potentials();
std::vector<RegistryEntry> registered_operators();
std::vector<RegistryEntry> registered_initial_data();

}  // namespace growthlab
