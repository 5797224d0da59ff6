#include "growthlab/drivers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

constexpr int kMaxDim = 8;

void require_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) fail(ErrorCode::InvalidArgument, "dimension must be in 1..8");
}

}  // namespace

const char* to_string(MonotonicityCertificate::Held held) {
  switch (held) {
    case MonotonicityCertificate::Held::None: return "none";
    case MonotonicityCertificate::Held::AtZero: return "at-zero";
    case MonotonicityCertificate::Held::Global: return "global";
  }
  return "?";
}

SmoothPhiSpec linear_average_phi(int dim) {
  require_dim(dim);
  SmoothPhiSpec s;
  s.name = "heat";
  s.dim = dim;
  const double w = 1.0 / (2.0 * dim);
  s.phi = [w](std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return w * sum;
  };
  s.gradient_at_zero = std::vector<double>(2 * dim, w);
  s.hessian_at_zero = Matrix(2 * dim);
  return s;
}

SmoothPhiSpec kpz_phi(int dim) {
  require_dim(dim);
  SmoothPhiSpec s;
  s.name = "kpz";
  s.dim = dim;
  const double w = 1.0 / (4.0 * dim);
  s.phi = [w, dim](std::span<const double> v) {
    double lin = 0.0, quad = 0.0;
    for (int i = 0; i < dim; ++i) {
      lin += v[2 * i] + v[2 * i + 1];
      const double g = v[2 * i] - v[2 * i + 1];
      quad += g * g;
    }
    return w * lin + 0.125 * quad;
  };
  s.gradient_at_zero = std::vector<double>(2 * dim, w);
  Matrix h(2 * dim);
  for (int i = 0; i < dim; ++i) {
    h(2 * i, 2 * i) = h(2 * i + 1, 2 * i + 1) = 0.25;
    h(2 * i, 2 * i + 1) = h(2 * i + 1, 2 * i) = -0.25;
  }
  s.hessian_at_zero = h;
  return s;
}

std::vector<double> phi_gradient(const SmoothPhiSpec& spec, std::span<const double> at) {
  const std::size_t n = at.size();
  std::vector<double> g(n), v(at.begin(), at.end());
  for (std::size_t a = 0; a < n; ++a) {
    v[a] = at[a] + kPhiFdStep;
    const double up = spec(v);
    v[a] = at[a] - kPhiFdStep;
    const double dn = spec(v);
    v[a] = at[a];
    g[a] = (up - dn) / (2.0 * kPhiFdStep);
  }
  return g;
}

std::vector<double> phi_gradient_at_zero(const SmoothPhiSpec& spec) {
  if (spec.gradient_at_zero) return *spec.gradient_at_zero;
  const std::vector<double> zero(2 * spec.dim, 0.0);
  return phi_gradient(spec, zero);
}

Matrix phi_hessian_at_zero(const SmoothPhiSpec& spec) {
  if (spec.hessian_at_zero) return *spec.hessian_at_zero;
  const int n = 2 * spec.dim;
  const double h = kPhiFdStep;
  Matrix m(n);
  std::vector<double> v(n, 0.0);
  auto eval = [&](int a, double sa, int b, double sb) {
    std::fill(v.begin(), v.end(), 0.0);
    v[a] += sa * h;
    v[b] += sb * h;
    return spec(v);
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      m(a, b) = (eval(a, 1, b, 1) - eval(a, 1, b, -1) - eval(a, -1, b, 1) + eval(a, -1, b, -1)) / (4.0 * h * h);
  return m.symmetrized();
}

MonotonicityCertificate check_monotonicity(const SmoothPhiSpec& spec, MonotonicityMode mode) {
  constexpr double kSlack = 1e-9;
  MonotonicityCertificate cert;
  cert.mode = mode;
  const int n = 2 * spec.dim;
  cert.margin = std::numeric_limits<double>::infinity();

  auto probe = [&](std::span<const double> v) {
    const std::vector<double> g = phi_gradient(spec, v);
    double sum = 0.0, min_partial = std::numeric_limits<double>::infinity();
    for (double x : g) {
      sum += x;
      min_partial = std::min(min_partial, x);
    }
    const double m = std::min(1.0 - sum, min_partial);
    if (m < cert.margin) {
      cert.margin = m;
      cert.violation_at.assign(v.begin(), v.end());
    }
  };

  if (mode == MonotonicityMode::AtZero) {
    const std::vector<double> zero(n, 0.0);
    probe(zero);
    cert.holds = cert.margin > kSlack;
  } else {
    // [-1,1]^{2d}, 5 points per axis.
    std::vector<int> idx(n, 0);
    std::vector<double> v(n);
    while (true) {
      for (int a = 0; a < n; ++a) v[a] = -1.0 + 0.5 * idx[a];
      probe(v);
      int a = n - 1;
      for (; a >= 0; --a) {
        if (++idx[a] < 5) break;
        idx[a] = 0;
      }
      if (a < 0) break;
    }
    cert.holds = cert.margin >= -kSlack;
  }
  std::ostringstream os;
  os << (mode == MonotonicityMode::Global ? "global" : "at-zero") << " margin " << cert.margin;
  if (!cert.holds) {
    os << ", violated at (";
    for (std::size_t a = 0; a < cert.violation_at.size(); ++a) os << (a ? "," : "") << cert.violation_at[a];
    os << ')';
  }
  cert.detail = os.str();
  if (cert.holds) cert.violation_at.clear();
  return cert;
}

MonotonicityCertificate::Held certify(SmoothPhiSpec& spec) {
  using Held = MonotonicityCertificate::Held;
  if (check_monotonicity(spec, MonotonicityMode::Global).holds) spec.certified = Held::Global;
  else if (check_monotonicity(spec, MonotonicityMode::AtZero).holds) spec.certified = Held::AtZero;
  else spec.certified = Held::None;
  return spec.certified;
}

const char* to_string(DriverKind kind) {
  switch (kind) {
    case DriverKind::MaxNeighbor: return "max";
    case DriverKind::PosPartAverage: return "pospart";
    case DriverKind::SmoothPhi: return "smooth_phi";
    case DriverKind::ArgminPotential: return "argmin";
    case DriverKind::MedianMidpoint: return "median";
    case DriverKind::RsosMidpoint: return "rsos";
  }
  return "?";
}

Driver::Driver(DriverKind kind, int dim, std::string name) : kind_(kind), dim_(dim), name_(std::move(name)) {
  require_dim(dim);
}

Driver Driver::max_neighbor(int dim) { return Driver(DriverKind::MaxNeighbor, dim, "max"); }
Driver Driver::pospart_average(int dim) { return Driver(DriverKind::PosPartAverage, dim, "pospart"); }
Driver Driver::median(int dim) { return Driver(DriverKind::MedianMidpoint, dim, "median"); }
Driver Driver::rsos(int dim) { return Driver(DriverKind::RsosMidpoint, dim, "rsos"); }

Driver Driver::argmin(int dim, Potential potential) {
  Driver d(DriverKind::ArgminPotential, dim, "argmin[" + potential.name() + "]");
  const PotentialCheck c = check_potential(potential);
  if (!c.symmetric || !c.convex || !c.zero_minimum)
    fail(ErrorCode::InvalidArgument, "potential " + potential.name() + " is not symmetric, convex, with minimum V(0)=0");
  d.potential_ = std::move(potential);
  return d;
}

Driver Driver::smooth_phi(SmoothPhiSpec spec) {
  if (!spec.phi) fail(ErrorCode::InvalidArgument, "smooth driver needs Phi");
  Driver d(DriverKind::SmoothPhi, spec.dim, "smooth_phi[" + spec.name + "]");
  const std::vector<double> zero(2 * spec.dim, 0.0);
  if (std::abs(spec(zero)) > 1e-14) fail(ErrorCode::InvalidArgument, "Phi(0) must be 0");
  const std::vector<double> g = phi_gradient_at_zero(spec);
  for (int i = 0; i < spec.dim; ++i)
    if (std::abs(g[2 * i] - g[2 * i + 1]) > 1e-6)
      fail(ErrorCode::InvalidArgument, "Phi first derivatives at 0 differ between +e" + std::to_string(i + 1) +
                                           " and -e" + std::to_string(i + 1));
  if (spec.certified == MonotonicityCertificate::Held::None) certify(spec);
  d.phi_ = std::make_shared<const SmoothPhiSpec>(std::move(spec));
  return d;
}

double Driver::increment(std::span<const double> diffs) const {
  if (static_cast<int>(diffs.size()) != 2 * dim_) fail(ErrorCode::InvalidArgument, "expected 2d neighbour values");
  switch (kind_) {
    case DriverKind::MaxNeighbor: return std::max(0.0, *std::max_element(diffs.begin(), diffs.end()));
    case DriverKind::PosPartAverage: {
      double s = 0.0;
      for (double v : diffs) s += std::max(0.0, v);
      return s / (2.0 * dim_);
    }
    case DriverKind::SmoothPhi: return (*phi_)(diffs);
    case DriverKind::MedianMidpoint: return median_midpoint(diffs);
    case DriverKind::RsosMidpoint: return rsos_midpoint(diffs);
    case DriverKind::ArgminPotential:
      switch (potential_->kind()) {
        case Potential::Kind::PowerEven: return argmin_power(potential_->k(), diffs);
        case Potential::Kind::FractionalPower: return argmin_fracpower(potential_->delta(), diffs);
        case Potential::Kind::AbsoluteValue: return median_midpoint(diffs);
        case Potential::Kind::FlatWell:
        case Potential::Kind::CustomConvex: return generic_convex_argmin(*potential_, diffs);
      }
  }
  fail(ErrorCode::Internal, "unknown driver kind");
}

double Driver::apply(double centre, std::span<const double> neighbours) const {
  const std::size_t n = neighbours.size();
  if (static_cast<int>(n) != 2 * dim_) fail(ErrorCode::InvalidArgument, "expected 2d neighbour values");
  if (kind_ == DriverKind::MaxNeighbor) return max_driver(centre, neighbours);
  if (kind_ == DriverKind::PosPartAverage) return pospart_driver(centre, neighbours);
  std::array<double, 2 * kMaxDim> diffs;
  for (std::size_t a = 0; a < n; ++a) diffs[a] = neighbours[a] - centre;
  return centre + increment(std::span<const double>(diffs.data(), n));
}

double max_driver(double centre, std::span<const double> neighbours) {
  double m = centre;
  for (double v : neighbours) m = std::max(m, v);
  return m;
}

double pospart_driver(double centre, std::span<const double> neighbours) {
  if (neighbours.empty() || neighbours.size() % 2 != 0) fail(ErrorCode::InvalidArgument, "expected 2d neighbour values");
  double s = 0.0;
  for (double v : neighbours) s += std::max(0.0, v - centre);
  return centre + s / static_cast<double>(neighbours.size());
}

double smooth_phi_driver(const SmoothPhiSpec& spec, double centre, std::span<const double> neighbours) {
  if (static_cast<int>(neighbours.size()) != 2 * spec.dim) fail(ErrorCode::InvalidArgument, "expected 2d neighbour values");
  std::vector<double> diffs(neighbours.size());
  for (std::size_t a = 0; a < diffs.size(); ++a) diffs[a] = neighbours[a] - centre;
  return centre + spec(diffs);
}

namespace {

// One unit step of the driver on the linear field q.x, read at the origin.
double linear_increment(const Driver& driver, std::span<const double> q) {
  std::vector<double> nbr(2 * q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    nbr[2 * i] = q[i];
    nbr[2 * i + 1] = -q[i];
  }
  return driver.apply(0.0, nbr);
}

}  // namespace

ScalingMode detect_scaling(const Driver& driver, std::span<const std::vector<double>> probes) {
  constexpr double s = 1e-3;
  bool off_axis = false;
  for (const auto& p : probes) {
    if (static_cast<int>(p.size()) != driver.dim()) fail(ErrorCode::InvalidArgument, "probe dimension mismatch");
    int nonzero = 0;
    for (double v : p) nonzero += v != 0.0;
    off_axis = off_axis || nonzero >= 2 || driver.dim() == 1;
  }
  if (!off_axis) fail(ErrorCode::InvalidArgument, "scaling probes must include a non-axis direction");
  for (const auto& p : probes) {
    std::vector<double> q(p.size()), q2(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] = s * p[i];
      q2[i] = 0.5 * s * p[i];
    }
    // Richardson estimate of the first-order part of inc(s p) / s as s -> 0.
    const double r = linear_increment(driver, q) / s;
    const double r2 = linear_increment(driver, q2) / (0.5 * s);
    if (std::abs(2.0 * r2 - r) > 1e-8) return ScalingMode::hyperbolic();
  }
  return ScalingMode::parabolic();
}

ScalingMode detect_scaling(const Driver& driver) {
  const int d = driver.dim();
  std::vector<std::vector<double>> probes;
  probes.emplace_back(d, 0.0);
  probes.back()[0] = 1.0;
  probes.emplace_back(d, 1.0);
  std::vector<double> mixed(d);
  for (int i = 0; i < d; ++i) mixed[i] = (i % 2 ? -1.0 : 1.0) * (0.3 + 0.7 * i);
  probes.push_back(mixed);
  return detect_scaling(driver, probes);
}

}  // namespace growthlab
