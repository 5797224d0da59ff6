#include "growthlab/registry.hpp"

#include "growthlab/error.hpp"

namespace growthlab {

Driver make_driver(const DriverSpec& spec, int dim) {
  if (spec.name == "max") return Driver::max_neighbor(dim);
  if (spec.name == "pospart") return Driver::pospart_average(dim);
  if (spec.name == "median") return Driver::median(dim);
  if (spec.name == "rsos") return Driver::rsos(dim);
  if (spec.name == "smooth_phi") {
    SmoothPhiSpec phi;
    if (spec.phi == "kpz") phi = kpz_phi(dim);
    else if (spec.phi == "heat") phi = linear_average_phi(dim);
    else fail(ErrorCode::Config, "unknown phi '" + spec.phi + "' (expected kpz or heat)");
    phi.require_lipschitz = spec.require_lipschitz;
    return Driver::smooth_phi(std::move(phi));
  }
  if (spec.name == "argmin") {
    if (spec.potential == "power") return Driver::argmin(dim, Potential::power_even(spec.k));
    if (spec.potential == "fractional") return Driver::argmin(dim, Potential::fractional_power(spec.delta));
    if (spec.potential == "abs") return Driver::argmin(dim, Potential::absolute_value());
    if (spec.potential == "flatwell") return Driver::argmin(dim, Potential::flat_well(spec.a));
    fail(ErrorCode::Config, "unknown potential '" + spec.potential + "' (expected power, fractional, abs or flatwell)");
  }
  fail(ErrorCode::Config, "unknown driver '" + spec.name + "'");
}

std::vector<std::string> driver_key_names() { return {"name", "potential", "k", "delta", "a", "phi", "require_lipschitz"}; }

DriverSpec driver_spec_from_config(const ConfigFile& config, const std::string& section) {
  DriverSpec s;
  s.name = config.get(section, "name").value_or(s.name);
  s.potential = config.get(section, "potential").value_or(s.potential);
  s.k = static_cast<int>(config.get_int(section, "k", s.k));
  s.delta = config.get_double(section, "delta", s.delta);
  s.a = config.get_double(section, "a", s.a);
  s.phi = config.get(section, "phi").value_or(s.phi);
  s.require_lipschitz = config.get_bool(section, "require_lipschitz", s.require_lipschitz);
  return s;
}

InitialData make_initial_data(const std::string& name) {
  if (name == "zero") return zero_data();
  if (name == "tent") return tent_data();
  if (name == "bump") return bump_data();
  if (name == "cos_x1") return cos_x1_data();
  if (name == "tanh_x1") return tanh_x1_data();
  if (name == "cos_product") return cos_product_data();
  if (name == "linear_plus_bump") return linear_plus_bump_data();
  fail(ErrorCode::Config, "unknown initial data '" + name + "'");
}

LimitOperator make_operator(const std::string& name, int dim, int k, double delta) {
  if (name == "hj_max") return LimitOperator::hj_max(dim);
  if (name == "hj_pospart") return LimitOperator::hj_pospart(dim);
  if (name == "smooth_ah") return LimitOperator::smooth(smooth_limit_operator(kpz_phi(dim)));
  if (name == "weighted_power") return LimitOperator::weighted_power(dim, k);
  if (name == "weighted_fractional") return LimitOperator::weighted_fractional(dim, delta);
  if (name == "median") return LimitOperator::median(dim);
  if (name == "crystalline") return LimitOperator::crystalline(dim);
  fail(ErrorCode::Config, "unknown operator '" + name + "'");
}

std::vector<RegistryEntry> registered_drivers() {
  return {
      {"max", "max over the site and its 2d neighbours (hyperbolic)"},
      {"pospart", "site + (1/2d) sum of positive neighbour differences (hyperbolic)"},
      {"smooth_phi", "site + Phi(neighbour differences), phi = kpz | heat (parabolic)"},
      {"argmin", "site + argmin_y sum V(y - diff), potential = power | fractional | abs | flatwell (parabolic)"},
      {"median", "site + midpoint of the median interval of the differences (parabolic)"},
      {"rsos", "site + (min + max)/2 of the differences (parabolic)"},
  };
}

std::vector<RegistryEntry> registered_potentials() {
  return {
      {"power", "V(y) = y^k, k even >= 2"},
      {"fractional", "V(y) = |y|^(2+delta), 0 < delta < 1"},
      {"abs", "V(y) = |y|"},
      {"flatwell", "V(y) = ((|y| - a)_+)^2"},
  };
}

std::vector<RegistryEntry> registered_operators() {
  return {
      {"hj_max", "u_t = max_i |u_i|"},
      {"hj_pospart", "u_t = (1/2d) sum_i |u_i|"},
      {"smooth_ah", "u_t = trace(A D^2u) + Du^T H Du"},
      {"weighted_power", "sum |u_i|^(k-2) u_ii / (2 sum |u_i|^(k-2))"},
      {"weighted_fractional", "sum |u_i|^delta u_ii / (2 sum |u_i|^delta)"},
      {"median", "1/2 u_ii on the coordinate of minimal |u_i|"},
      {"crystalline", "1/2 u_ii on the coordinate of maximal |u_i|"},
  };
}

std::vector<RegistryEntry> registered_initial_data() {
  return {
      {"zero", "0"},
      {"tent", "max(0, 1 - |x|)"},
      {"bump", "exp(-|x|^2)"},
      {"cos_x1", "cos(x_1)"},
      {"tanh_x1", "tanh(x_1)"},
      {"cos_product", "prod_i cos(x_i)"},
      {"linear_plus_bump", "x_1/2 + x_2/4 + exp(-|x|^2)"},
  };
}

}  // namespace growthlab
