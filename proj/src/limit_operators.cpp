#include "growthlab/limit_operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "growthlab/error.hpp"

namespace growthlab {

double H_max(std::span<const double> p) {
  double m = 0.0;
  for (double v : p) m = std::max(m, std::abs(v));
  return m;
}

double H_pospart(std::span<const double> p) {
  if (p.empty()) fail(ErrorCode::InvalidArgument, "gradient must be nonempty");
  double s = 0.0;
  for (double v : p) s += std::abs(v);
  return s / (2.0 * static_cast<double>(p.size()));
}

double SmoothAH::evaluate(const Matrix& X, std::span<const double> p) const {
  if (X.size() != dim() || static_cast<int>(p.size()) != dim()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  double tr = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) tr += A(i, j) * X(j, i);
  return tr + H.quadratic_form(p);
}

SmoothAH smooth_limit_operator(const SmoothPhiSpec& spec) {
  const int d = spec.dim;
  const std::vector<double> g = phi_gradient_at_zero(spec);
  SmoothAH ah{Matrix(d), Matrix(d)};
  for (int i = 0; i < d; ++i) {
    if (std::abs(g[2 * i] - g[2 * i + 1]) > kPhiSymmetryTolerance)
      fail(ErrorCode::InvalidArgument, "Phi derivatives at 0 are not symmetric on axis " + std::to_string(i + 1));
    ah.A(i, i) = 0.5 * (g[2 * i] + g[2 * i + 1]);
  }
  const Matrix m = phi_hessian_at_zero(spec);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      ah.H(i, j) = 0.5 * (m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1) - m(2 * i, 2 * j + 1) - m(2 * i + 1, 2 * j));
  ah.H = ah.H.symmetrized();
  return ah;
}

double F_weighted(const Matrix& X, std::span<const double> p, double exponent) {
  if (static_cast<int>(p.size()) != X.size()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  double num = 0.0, den = 0.0;
  bool nonzero = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    nonzero = nonzero || p[i] != 0.0;
    const double w = std::pow(std::abs(p[i]), exponent);
    num += w * X(static_cast<int>(i), static_cast<int>(i));
    den += w;
  }
  if (!nonzero) fail(ErrorCode::Domain, "weighted operator is undefined at p = 0; use the envelopes");
  return num / (2.0 * den);
}

Envelope envelopes_weighted(const Matrix& X) {
  if (X.size() < 1) fail(ErrorCode::InvalidArgument, "empty matrix");
  double hi = X(0, 0), lo = X(0, 0);
  for (int i = 1; i < X.size(); ++i) {
    hi = std::max(hi, X(i, i));
    lo = std::min(lo, X(i, i));
  }
  return {0.5 * hi, 0.5 * lo};
}

PartitionLabel classify_partition(std::span<const double> p, Orientation orientation) {
  if (p.empty()) fail(ErrorCode::InvalidArgument, "gradient must be nonempty");
  double best = std::abs(p[0]);
  for (double v : p)
    best = orientation == Orientation::MinCoordinates ? std::min(best, std::abs(v)) : std::max(best, std::abs(v));
  PartitionLabel label{{}, orientation};
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::abs(p[i]) == best) label.A.push_back(static_cast<int>(i));
  return label;
}

namespace {

OperatorValue partition_value(const Matrix& X, std::span<const double> p, Orientation o) {
  if (static_cast<int>(p.size()) != X.size()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  const PartitionLabel label = classify_partition(p, o);
  double hi = X(label.A[0], label.A[0]), lo = hi;
  for (int i : label.A) {
    hi = std::max(hi, X(i, i));
    lo = std::min(lo, X(i, i));
  }
  return {0.5 * hi, 0.5 * lo, !label.singleton()};
}

}  // namespace

OperatorValue F_median(const Matrix& X, std::span<const double> p) {
  return partition_value(X, p, Orientation::MinCoordinates);
}

OperatorValue F_crystalline(const Matrix& X, std::span<const double> p) {
  return partition_value(X, p, Orientation::MaxCoordinates);
}

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::HJMax: return "hj_max";
    case OperatorKind::HJPosPart: return "hj_pospart";
    case OperatorKind::SmoothAH: return "smooth_ah";
    case OperatorKind::WeightedPower: return "weighted_power";
    case OperatorKind::WeightedFractional: return "weighted_fractional";
    case OperatorKind::MedianOp: return "median";
    case OperatorKind::CrystallineOp: return "crystalline";
  }
  return "?";
}

LimitOperator::LimitOperator(OperatorKind kind, int dim, std::string name)
    : kind_(kind), dim_(dim), name_(std::move(name)) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
}

LimitOperator LimitOperator::hj_max(int dim) { return LimitOperator(OperatorKind::HJMax, dim, "hj_max"); }
LimitOperator LimitOperator::hj_pospart(int dim) { return LimitOperator(OperatorKind::HJPosPart, dim, "hj_pospart"); }
LimitOperator LimitOperator::median(int dim) { return LimitOperator(OperatorKind::MedianOp, dim, "median"); }
LimitOperator LimitOperator::crystalline(int dim) { return LimitOperator(OperatorKind::CrystallineOp, dim, "crystalline"); }

LimitOperator LimitOperator::smooth(SmoothAH ah) {
  if (!ah.H.is_symmetric(1e-12)) fail(ErrorCode::InvalidArgument, "H must be symmetric");
  LimitOperator op(OperatorKind::SmoothAH, ah.dim(), "smooth_ah");
  op.ah_ = std::move(ah);
  return op;
}

LimitOperator LimitOperator::weighted_power(int dim, int k) {
  if (k < 2 || k % 2 != 0) fail(ErrorCode::InvalidArgument, "weighted power operator needs an even k >= 2");
  LimitOperator op(OperatorKind::WeightedPower, dim, "weighted_power(k=" + std::to_string(k) + ")");
  op.exponent_ = k - 2;
  return op;
}

LimitOperator LimitOperator::weighted_fractional(int dim, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidArgument, "weighted fractional operator needs 0 < delta < 1");
  LimitOperator op(OperatorKind::WeightedFractional, dim, "weighted_fractional(delta=" + [&] { std::ostringstream os; os << delta; return os.str(); }() + ")");
  op.exponent_ = delta;
  return op;
}

bool LimitOperator::singular(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_) fail(ErrorCode::InvalidArgument, "gradient dimension mismatch");
  switch (kind_) {
    case OperatorKind::WeightedPower:
    case OperatorKind::WeightedFractional:
      return std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; });
    case OperatorKind::MedianOp: return !classify_partition(p, Orientation::MinCoordinates).singleton();
    case OperatorKind::CrystallineOp: return !classify_partition(p, Orientation::MaxCoordinates).singleton();
    default: return false;
  }
}

OperatorValue LimitOperator::evaluate(const Matrix& X, std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_ || X.size() != dim_) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  auto exact = [](double v) { return OperatorValue{v, v, false}; };
  switch (kind_) {
    case OperatorKind::HJMax: return exact(H_max(p));
    case OperatorKind::HJPosPart: return exact(H_pospart(p));
    case OperatorKind::SmoothAH: return exact(ah_.evaluate(X, p));
    case OperatorKind::WeightedPower:
    case OperatorKind::WeightedFractional:
      if (singular(p)) {
        const Envelope e = envelopes_weighted(X);
        return {e.upper, e.lower, true};
      }
      return exact(F_weighted(X, p, exponent_));
    case OperatorKind::MedianOp: return F_median(X, p);
    case OperatorKind::CrystallineOp: return F_crystalline(X, p);
  }
  fail(ErrorCode::Internal, "unknown operator kind");
}

LimitOperator limit_operator_for(const Driver& driver) {
  const int d = driver.dim();
  switch (driver.kind()) {
    case DriverKind::MaxNeighbor: return LimitOperator::hj_max(d);
    case DriverKind::PosPartAverage: return LimitOperator::hj_pospart(d);
    case DriverKind::SmoothPhi: return LimitOperator::smooth(smooth_limit_operator(*driver.phi_spec()));
    case DriverKind::MedianMidpoint: return LimitOperator::median(d);
    case DriverKind::RsosMidpoint: return LimitOperator::crystalline(d);
    case DriverKind::ArgminPotential: {
      const Potential& v = *driver.potential();
      switch (v.kind()) {
        case Potential::Kind::PowerEven: return LimitOperator::weighted_power(d, v.k());
        case Potential::Kind::FractionalPower: return LimitOperator::weighted_fractional(d, v.delta());
        case Potential::Kind::AbsoluteValue: return LimitOperator::median(d);
        // Near zero differences the flat-well minimizer is the RSOS midpoint.
        case Potential::Kind::FlatWell: return LimitOperator::crystalline(d);
        case Potential::Kind::CustomConvex: break;
      }
      fail(ErrorCode::Domain, "no limit operator is known for potential " + v.name());
    }
  }
  fail(ErrorCode::Internal, "unknown driver kind");
}

}  // namespace growthlab
