#include "growthlab/initial_data.hpp"

#include <cmath>
#include <limits>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

std::vector<double> zeros(std::span<const double> x) { return std::vector<double>(x.size(), 0.0); }

}  // namespace

InitialData zero_data() {
  InitialData u;
  u.name = "zero";
  u.evaluate = [](std::span<const double>) { return 0.0; };
  u.lipschitz = 0.0;
  u.cosine_modes = std::vector<double>{0.0};
  u.gradient = zeros;
  u.hessian = [](std::span<const double> x) { return Matrix(static_cast<int>(x.size())); };
  return u;
}

InitialData tent_data() {
  InitialData u;
  u.name = "tent";
  u.evaluate = [](std::span<const double> x) { return std::max(0.0, 1.0 - std::sqrt(norm2(x))); };
  u.lipschitz = 1.0;
  // Almost-everywhere gradient; zero at the apex and outside the support.
  u.gradient = [](std::span<const double> x) {
    std::vector<double> g(x.size(), 0.0);
    const double r = std::sqrt(norm2(x));
    if (r > 0.0 && r < 1.0)
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = -x[i] / r;
    return g;
  };
  return u;
}

InitialData bump_data() {
  InitialData u;
  u.name = "bump";
  u.evaluate = [](std::span<const double> x) { return std::exp(-norm2(x)); };
  u.lipschitz = std::sqrt(2.0) * std::exp(-0.5);  // max of 2r exp(-r^2)
  u.gradient = [](std::span<const double> x) {
    const double e = std::exp(-norm2(x));
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -2.0 * x[i] * e;
    return g;
  };
  u.hessian = [](std::span<const double> x) {
    const int d = static_cast<int>(x.size());
    const double e = std::exp(-norm2(x));
    Matrix h(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) h(i, j) = (4.0 * x[i] * x[j] - (i == j ? 2.0 : 0.0)) * e;
    return h;
  };
  return u;
}

InitialData cosine_series_data(std::vector<double> modes) {
  if (modes.empty()) fail(ErrorCode::InvalidArgument, "cosine series needs at least one coefficient");
  InitialData u;
  u.name = "cosine_series";
  double lip = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) lip += static_cast<double>(m) * std::abs(modes[m]);
  u.lipschitz = lip;
  u.evaluate = [modes](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) s += modes[m] * std::cos(static_cast<double>(m) * x[0]);
    return s;
  };
  u.gradient = [modes](std::span<const double> x) {
    std::vector<double> g(x.size(), 0.0);
    for (std::size_t m = 0; m < modes.size(); ++m)
      g[0] -= modes[m] * static_cast<double>(m) * std::sin(static_cast<double>(m) * x[0]);
    return g;
  };
  u.hessian = [modes](std::span<const double> x) {
    Matrix h(static_cast<int>(x.size()));
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const double mm = static_cast<double>(m);
      h(0, 0) -= modes[m] * mm * mm * std::cos(mm * x[0]);
    }
    return h;
  };
  u.cosine_modes = std::move(modes);
  return u;
}

InitialData cos_x1_data() {
  InitialData u = cosine_series_data({0.0, 1.0});
  u.name = "cos_x1";
  return u;
}

InitialData tanh_x1_data() {
  InitialData u;
  u.name = "tanh_x1";
  u.evaluate = [](std::span<const double> x) { return std::tanh(x[0]); };
  u.lipschitz = 1.0;
  u.gradient = [](std::span<const double> x) {
    std::vector<double> g(x.size(), 0.0);
    const double c = std::cosh(x[0]);
    g[0] = 1.0 / (c * c);
    return g;
  };
  u.hessian = [](std::span<const double> x) {
    Matrix h(static_cast<int>(x.size()));
    const double th = std::tanh(x[0]);
    h(0, 0) = -2.0 * th * (1.0 - th * th);
    return h;
  };
  return u;
}

InitialData cos_product_data() {
  InitialData u;
  u.name = "cos_product";
  u.evaluate = [](std::span<const double> x) {
    double p = 1.0;
    for (double v : x) p *= std::cos(v);
    return p;
  };
  u.lipschitz = 2.0;  // |grad| <= sqrt(d), valid for d <= 4
  u.gradient = [](std::span<const double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double p = -std::sin(x[i]);
      for (std::size_t j = 0; j < x.size(); ++j)
        if (j != i) p *= std::cos(x[j]);
      g[i] = p;
    }
    return g;
  };
  u.hessian = [](std::span<const double> x) {
    const int d = static_cast<int>(x.size());
    Matrix h(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double p = 1.0;
        for (int k = 0; k < d; ++k) {
          const bool hit_i = k == i, hit_j = k == j;
          if (hit_i && hit_j) p *= -std::cos(x[k]);
          else if (hit_i || hit_j) p *= -std::sin(x[k]);
          else p *= std::cos(x[k]);
        }
        h(i, j) = p;
      }
    return h;
  };
  return u;
}

InitialData linear_plus_bump_data() {
  InitialData u;
  u.name = "linear_plus_bump";
  static constexpr double kSlope[2] = {0.5, 0.25};
  u.evaluate = [](std::span<const double> x) {
    double s = std::exp(-norm2(x));
    for (std::size_t i = 0; i < x.size() && i < 2; ++i) s += kSlope[i] * x[i];
    return s;
  };
  u.lipschitz = std::sqrt(0.3125) + std::sqrt(2.0) * std::exp(-0.5);
  const InitialData b = bump_data();
  u.gradient = [g = b.gradient](std::span<const double> x) {
    std::vector<double> r = g(x);
    for (std::size_t i = 0; i < x.size() && i < 2; ++i) r[i] += kSlope[i];
    return r;
  };
  u.hessian = b.hessian;
  return u;
}

InitialDataCheck check_initial_data(const InitialData& u0, int dim) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  const int per_axis = dim == 1 ? 161 : dim == 2 ? 41 : 17;
  const double lo = -4.0, step = 8.0 / (per_axis - 1);
  InitialDataCheck check;
  check.bounded = true;

  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim), y(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) x[i] = lo + step * idx[i];
    const double v = u0(x);
    if (!std::isfinite(v)) check.bounded = false;
    else check.sampled_sup = std::max(check.sampled_sup, std::abs(v));
    for (int i = 0; i < dim; ++i) {
      if (idx[i] + 1 >= per_axis) continue;
      y = x;
      y[i] += step;
      const double w = u0(y);
      if (std::isfinite(v) && std::isfinite(w)) check.worst_ratio = std::max(check.worst_ratio, std::abs(w - v) / step);
    }
    int axis = dim - 1;
    for (; axis >= 0; --axis) {
      if (++idx[axis] < per_axis) break;
      idx[axis] = 0;
    }
    if (axis < 0) break;
  }
  const double bound = u0.lipschitz.value_or(std::numeric_limits<double>::infinity());
  check.uniformly_continuous = check.bounded && check.worst_ratio <= bound * (1.0 + 1e-9) + 1e-12;
  return check;
}

}  // namespace growthlab
