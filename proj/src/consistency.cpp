#include "growthlab/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "growthlab/error.hpp"

namespace growthlab {

TestFunction::TestFunction(Family family, int dim, std::string name)
    : family_(family), dim_(dim), name_(std::move(name)) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
}

TestFunction TestFunction::quadratic(std::vector<double> p, Matrix X, std::vector<double> x0) {
  const int d = static_cast<int>(p.size());
  if (X.size() != d) fail(ErrorCode::InvalidArgument, "quadratic: p and X dimensions differ");
  if (x0.empty()) x0.assign(d, 0.0);
  if (static_cast<int>(x0.size()) != d) fail(ErrorCode::InvalidArgument, "quadratic: x0 dimension mismatch");
  std::ostringstream os;
  os << "quadratic(p=(";
  for (int i = 0; i < d; ++i) os << (i ? "," : "") << p[i];
  os << "),X=" << to_string(X) << ')';
  TestFunction f(Family::Quadratic, d, os.str());
  f.p_ = std::move(p);
  f.X_ = X.symmetrized();
  f.x0_ = std::move(x0);
  return f;
}

TestFunction TestFunction::cosine_product(int dim) { return TestFunction(Family::CosineProduct, dim, "cosine_product"); }
TestFunction TestFunction::bump(int dim) { return TestFunction(Family::Bump, dim, "bump"); }

double TestFunction::operator()(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != dim_) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
  switch (family_) {
    case Family::Quadratic: {
      std::vector<double> z(dim_);
      double lin = 0.0;
      for (int i = 0; i < dim_; ++i) {
        z[i] = y[i] - x0_[i];
        lin += p_[i] * z[i];
      }
      return lin + 0.5 * X_.quadratic_form(z);
    }
    case Family::CosineProduct: {
      double r = 1.0;
      for (double v : y) r *= std::cos(v);
      return r;
    }
    case Family::Bump: {
      double s = 0.0;
      for (double v : y) s += v * v;
      return std::exp(-s);
    }
  }
  return 0.0;
}

std::vector<double> TestFunction::gradient(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != dim_) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
  std::vector<double> g(dim_);
  switch (family_) {
    case Family::Quadratic: {
      std::vector<double> z(dim_);
      for (int i = 0; i < dim_; ++i) z[i] = y[i] - x0_[i];
      g = X_.apply(z);
      for (int i = 0; i < dim_; ++i) g[i] += p_[i];
      break;
    }
    case Family::CosineProduct:
      for (int i = 0; i < dim_; ++i) {
        double r = -std::sin(y[i]);
        for (int j = 0; j < dim_; ++j)
          if (j != i) r *= std::cos(y[j]);
        g[i] = r;
      }
      break;
    case Family::Bump: {
      const double e = (*this)(y);
      for (int i = 0; i < dim_; ++i) g[i] = -2.0 * y[i] * e;
      break;
    }
  }
  return g;
}

Matrix TestFunction::hessian(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != dim_) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
  Matrix h(dim_);
  switch (family_) {
    case Family::Quadratic: return X_;
    case Family::CosineProduct:
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
          double r = 1.0;
          for (int k = 0; k < dim_; ++k) {
            if (k == i && k == j) r *= -std::cos(y[k]);
            else if (k == i || k == j) r *= -std::sin(y[k]);
            else r *= std::cos(y[k]);
          }
          h(i, j) = r;
        }
      return h;
    case Family::Bump: {
      const double e = (*this)(y);
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) h(i, j) = (4.0 * y[i] * y[j] - (i == j ? 2.0 : 0.0)) * e;
      return h;
    }
  }
  return h;
}

bool self_check(const TestFunction& phi, std::span<const double> at, double tol) {
  const int d = phi.dim();
  const double hg = 1e-5, hh = 1e-4;
  const std::vector<double> g = phi.gradient(at);
  const Matrix H = phi.hessian(at);
  std::vector<double> y(at.begin(), at.end());
  auto shifted = [&](int a, double sa, int b, double sb) {
    std::copy(at.begin(), at.end(), y.begin());
    y[a] += sa;
    if (b >= 0) y[b] += sb;
    return phi(y);
  };
  for (int a = 0; a < d; ++a) {
    const double fd = (shifted(a, hg, -1, 0) - shifted(a, -hg, -1, 0)) / (2.0 * hg);
    if (std::abs(fd - g[a]) > tol) return false;
    for (int b = 0; b < d; ++b) {
      const double fh = (shifted(a, hh, b, hh) - shifted(a, hh, b, -hh) - shifted(a, -hh, b, hh) +
                         shifted(a, -hh, b, -hh)) / (4.0 * hh * hh);
      if (std::abs(fh - H(a, b)) > tol) return false;
    }
  }
  return true;
}

namespace {

std::vector<double> stencil_diffs(const TestFunction& phi, std::span<const double> y, double h) {
  const int d = phi.dim();
  const double c = phi(y);
  std::vector<double> z(y.begin(), y.end()), diffs(2 * d);
  for (int i = 0; i < d; ++i) {
    z[i] = y[i] + h;
    diffs[2 * i] = phi(z) - c;
    z[i] = y[i] - h;
    diffs[2 * i + 1] = phi(z) - c;
    z[i] = y[i];
  }
  return diffs;
}

}  // namespace

double consistency_ratio(const Driver& driver, const TestFunction& phi, std::span<const double> y, double epsilon,
                         ScalingMode scaling) {
  if (driver.dim() != phi.dim()) fail(ErrorCode::InvalidArgument, "driver and test function dimensions differ");
  const std::vector<double> diffs = stencil_diffs(phi, y, scaling.spacing(epsilon));
  return driver.increment(diffs) / epsilon;
}

const char* to_string(OffsetSchedule schedule) {
  return schedule == OffsetSchedule::AtPoint ? "at_point" : "approach";
}

ConsistencyReport consistency_sweep(const Driver& driver, const TestFunction& phi, std::span<const double> x,
                                    std::span<const double> epsilons, const SweepOptions& options) {
  const int d = phi.dim();
  if (static_cast<int>(x.size()) != d) fail(ErrorCode::InvalidArgument, "probe point dimension mismatch");
  if (epsilons.empty()) fail(ErrorCode::InvalidArgument, "consistency sweep needs at least one epsilon");
  const LimitOperator op = limit_operator_for(driver);
  const ScalingMode scaling = detect_scaling(driver);

  std::vector<double> u = options.direction;
  if (u.empty()) u.assign(d, 1.0 / std::sqrt(static_cast<double>(d)));
  if (static_cast<int>(u.size()) != d) fail(ErrorCode::InvalidArgument, "offset direction dimension mismatch");

  ConsistencyReport r;
  r.driver = driver.name();
  r.test_function = phi.name();
  r.x.assign(x.begin(), x.end());
  r.epsilons.assign(epsilons.begin(), epsilons.end());
  r.offset = options.offset;
  const std::vector<double> p = phi.gradient(x);
  r.target = op.evaluate(phi.hessian(x), p);

  std::vector<double> y(d);
  for (double eps : epsilons) {
    const double shift = options.offset == OffsetSchedule::Approach ? std::sqrt(eps) : 0.0;
    for (int i = 0; i < d; ++i) y[i] = x[i] + shift * u[i];
    r.ratios.push_back(consistency_ratio(driver, phi, y, eps, scaling));
  }

  std::ostringstream why;
  if (r.target.singular) {
    r.passed = true;
    for (std::size_t k = 0; k < r.ratios.size(); ++k)
      if (!r.target.contains(r.ratios[k], options.envelope_tolerance)) {
        r.passed = false;
        why << "ratio " << r.ratios[k] << " at eps=" << r.epsilons[k] << " outside envelope [" << r.target.lower
            << ", " << r.target.upper << "]";
        break;
      }
    if (r.passed) why << "all ratios within envelope [" << r.target.lower << ", " << r.target.upper << "]";
  } else {
    for (double v : r.ratios) r.errors.push_back(std::abs(v - r.target.value()));
    bool decreasing = true;
    for (std::size_t k = 1; k < r.errors.size(); ++k)
      if (r.errors[k] > r.errors[k - 1] + kRatioNoiseFloor) decreasing = false;
    const double final_error = r.errors.back();
    r.passed = decreasing && final_error <= options.tolerance;
    if (!decreasing) why << "errors not decreasing along eps";
    else if (final_error > options.tolerance) why << "final error " << final_error << " > " << options.tolerance;
    else why << "final error " << final_error << " <= " << options.tolerance;
  }
  r.verdict_reason = why.str();
  return r;
}

bool sandwich_check(const Driver& driver, const TestFunction& phi, std::span<const double> y, double epsilon) {
  switch (driver.kind()) {
    case DriverKind::ArgminPotential:
    case DriverKind::MedianMidpoint:
    case DriverKind::RsosMidpoint: break;
    default: fail(ErrorCode::InvalidArgument, "sandwich check applies to argmin drivers only");
  }
  const std::vector<double> diffs = stencil_diffs(phi, y, ScalingMode::parabolic().spacing(epsilon));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < driver.dim(); ++i) {
    const double delta = 0.5 * (diffs[2 * i] + diffs[2 * i + 1]);
    lo = std::min(lo, delta);
    hi = std::max(hi, delta);
  }
  const double v = driver.increment(diffs);
  return v >= lo && v <= hi;
}

TestFunction random_quadratic(const LimitOperator& op, std::mt19937_64& rng, bool on_singular) {
  const int d = op.dim();
  std::uniform_real_distribution<double> mag(0.5, 2.0), unit(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  auto signed_mag = [&](double m) { return coin(rng) ? m : -m; };
  const bool partitioned = op.kind() == OperatorKind::MedianOp || op.kind() == OperatorKind::CrystallineOp;
  const bool weighted = op.kind() == OperatorKind::WeightedPower || op.kind() == OperatorKind::WeightedFractional;

  std::vector<double> p(d, 0.0);
  if (!on_singular) {
    while (true) {
      for (double& v : p) v = signed_mag(mag(rng));
      if (!partitioned) break;
      bool separated = true;
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) separated = separated && std::abs(std::abs(p[i]) - std::abs(p[j])) >= 0.2;
      if (separated) break;
    }
  } else if (weighted) {
    // p = 0
  } else if (partitioned) {
    if (d < 2) fail(ErrorCode::InvalidArgument, "the partition singular set is empty in d = 1");
    const double m = mag(rng);
    p[0] = signed_mag(m);
    p[1] = signed_mag(m);
    std::uniform_real_distribution<double> gap(0.2, 1.0), frac(0.1, 0.8);
    for (int i = 2; i < d; ++i)
      p[i] = signed_mag(op.kind() == OperatorKind::MedianOp ? m + gap(rng) : m * frac(rng));
  } else {
    fail(ErrorCode::InvalidArgument, "operator " + op.name() + " has no singular set");
  }

  Matrix X(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) X(i, j) = X(j, i) = unit(rng);
  return TestFunction::quadratic(std::move(p), X);
}

ConsistencyBatch run_consistency_batch(const Driver& driver, const ConsistencyBatchOptions& options,
                                       std::uint64_t seed) {
  const LimitOperator op = limit_operator_for(driver);
  std::mt19937_64 rng(seed);
  ConsistencyBatch batch;
  const std::vector<double> x(driver.dim(), 0.0);
  auto run = [&](bool on_singular) {
    const TestFunction phi = random_quadratic(op, rng, on_singular);
    batch.reports.push_back(consistency_sweep(driver, phi, x, options.epsilons, options.sweep));
    if (!batch.reports.back().passed) ++batch.failures;
  };
  for (int k = 0; k < options.quadratics; ++k) run(false);
  const bool has_singular_set = (op.kind() == OperatorKind::WeightedPower || op.kind() == OperatorKind::WeightedFractional) ||
                                ((op.kind() == OperatorKind::MedianOp || op.kind() == OperatorKind::CrystallineOp) &&
                                 driver.dim() >= 2);
  if (has_singular_set)
    for (int k = 0; k < options.singular_probes; ++k) run(true);
  batch.passed = batch.failures == 0;
  return batch;
}

void write_consistency_csv(const ConsistencyBatch& batch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Config, "cannot write " + path);
  out << "driver,test_function,x,epsilon,ratio,target_lower,target_upper,singular,verdict\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : batch.reports) {
    std::string x;
    for (std::size_t i = 0; i < r.x.size(); ++i) x += (i ? " " : "") + num(r.x[i]);
    for (std::size_t k = 0; k < r.epsilons.size(); ++k)
      out << r.driver << ",\"" << r.test_function << "\"," << x << ',' << num(r.epsilons[k]) << ',' << num(r.ratios[k])
          << ',' << num(r.target.lower) << ',' << num(r.target.upper) << ',' << (r.target.singular ? 1 : 0) << ','
          << (r.passed ? "PASS" : "FAIL") << '\n';
  }
  if (!out) fail(ErrorCode::Config, "failed writing " + path);
}

}  // namespace growthlab
