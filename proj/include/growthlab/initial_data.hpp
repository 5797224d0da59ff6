#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "growthlab/matrix.hpp"

namespace growthlab {

using ScalarField = std::function<double(std::span<const double>)>;

/// Initial height u0 : R^d -> R.
struct InitialData {
  std::string name;
  ScalarField evaluate;
  /// Modulus of continuity, stated as a Lipschitz bound (|u0(x)-u0(y)| <= L|x-y|).
  std::optional<double> lipschitz;
  /// Cosine coefficients c_m (m = 0, 1, ...) when u0(x) = sum_m c_m cos(m x_1).
  std::optional<std::vector<double>> cosine_modes;
  std::function<std::vector<double>(std::span<const double>)> gradient;
  std::function<Matrix(std::span<const double>)> hessian;

  double operator()(std::span<const double> x) const { return evaluate(x); }
};

InitialData zero_data();
/// max(0, 1 - |x|_2)
InitialData tent_data();
/// exp(-|x|^2)
InitialData bump_data();
/// cos(x_1)
InitialData cos_x1_data();
InitialData cosine_series_data(std::vector<double> modes);
/// tanh(x_1): strictly monotone in x_1, constant in the other coordinates.
InitialData tanh_x1_data();
/// prod_i cos(x_i)
InitialData cos_product_data();
/// 0.5 x_1 + 0.25 x_2 + exp(-|x|^2) (linear part truncated to the first two axes)
InitialData linear_plus_bump_data();

struct InitialDataCheck {
  bool bounded = false;
  bool uniformly_continuous = false;
  double sampled_sup = 0.0;
  double worst_ratio = 0.0;  // max |u(x)-u(y)| / |x-y| over probe pairs
};

/// Samples u0 on a fixed probe grid in [-4,4]^d: finite sup, and neighbouring
/// probe differences within the stated Lipschitz bound.
InitialDataCheck check_initial_data(const InitialData& u0, int dim);

}  // namespace growthlab
