#include "growthlab/lattice.hpp"

#include <cmath>
#include <string>

#include "growthlab/drivers.hpp"
#include "growthlab/error.hpp"

namespace growthlab {

double ScalingMode::spacing(double epsilon) const {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  return kind == ScalingKind::Hyperbolic ? epsilon : std::sqrt(epsilon);
}

const char* to_string(ScalingKind kind) {
  return kind == ScalingKind::Hyperbolic ? "hyperbolic" : "parabolic";
}

std::size_t Box::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dim(); ++i) n *= static_cast<std::size_t>(extent(i));
  return n;
}

bool Box::contains(std::span<const std::int64_t> site) const {
  if (static_cast<int>(site.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (site[i] < lo[i] || site[i] > hi[i]) return false;
  return true;
}

bool Box::contains(const Box& inner) const {
  if (inner.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
  return true;
}

Box Box::shrunk(std::int64_t cells) const { return grown(-cells); }

Box Box::grown(std::int64_t cells) const {
  Box b = *this;
  for (int i = 0; i < dim(); ++i) {
    b.lo[i] -= cells;
    b.hi[i] += cells;
  }
  return b;
}

Window Window::cube(int dim, double lo, double hi) {
  return Window{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

HeightField::HeightField(Box box, double epsilon, ScalingMode scaling, std::int64_t step)
    : box_(std::move(box)), epsilon_(epsilon), scaling_(scaling), step_(step) {
  if (box_.dim() < 1) fail(ErrorCode::InvalidArgument, "height field needs dimension >= 1");
  if (box_.hi.size() != box_.lo.size()) fail(ErrorCode::InvalidArgument, "box bounds differ in dimension");
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (step < 0) fail(ErrorCode::InvalidArgument, "step must be nonnegative");
  for (int i = 0; i < box_.dim(); ++i)
    if (box_.extent(i) < 1) fail(ErrorCode::InvalidArgument, "box is empty on axis " + std::to_string(i));
  strides_.assign(box_.dim(), 1);
  for (int i = box_.dim() - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * box_.extent(i + 1);
  values_.assign(box_.size(), 0.0);
}

std::size_t HeightField::index(std::span<const std::int64_t> site) const {
  if (!box_.contains(site)) fail(ErrorCode::Domain, "site outside the field box");
  std::int64_t k = 0;
  for (int i = 0; i < dim(); ++i) k += (site[i] - box_.lo[i]) * strides_[i];
  return static_cast<std::size_t>(k);
}

double HeightField::at(std::span<const std::int64_t> site) const { return values_[index(site)]; }
double& HeightField::at(std::span<const std::int64_t> site) { return values_[index(site)]; }

std::int64_t time_index(double t, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!(t >= 0.0)) fail(ErrorCode::Domain, "time must be nonnegative");
  const double q = t / epsilon;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(q));
}

Box window_image(const Window& window, double spacing) {
  if (window.dim() < 1 || window.hi.size() != window.lo.size())
    fail(ErrorCode::InvalidArgument, "window must have matching bounds");
  if (!(spacing > 0.0)) fail(ErrorCode::InvalidArgument, "spacing must be positive");
  Box b{std::vector<std::int64_t>(window.dim()), std::vector<std::int64_t>(window.dim())};
  for (int i = 0; i < window.dim(); ++i) {
    if (!(window.hi[i] > window.lo[i])) fail(ErrorCode::InvalidArgument, "window is empty");
    b.lo[i] = static_cast<std::int64_t>(std::floor(window.lo[i] / spacing));
    b.hi[i] = static_cast<std::int64_t>(std::ceil(window.hi[i] / spacing));
  }
  return b;
}

HeightField init_field(const InitialData& u0, const Window& window, std::int64_t steps, double epsilon,
                       ScalingMode scaling) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (steps < 0) fail(ErrorCode::InvalidArgument, "steps must be nonnegative");
  const double h = scaling.spacing(epsilon);
  HeightField field(window_image(window, h).grown(steps), epsilon, scaling, 0);
  std::vector<double> x(field.dim());
  field.for_each_site([&](std::span<const std::int64_t> site, double& v) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = h * static_cast<double>(site[i]);
    v = u0(x);
    if (!std::isfinite(v)) fail(ErrorCode::Domain, "initial data is not finite at a lattice site");
  });
  return field;
}

HeightField step(const HeightField& field, const Driver& driver) {
  const int d = field.dim();
  if (driver.dim() != d) fail(ErrorCode::InvalidArgument, "driver and field dimensions differ");
  for (int i = 0; i < d; ++i)
    if (field.box().extent(i) < 3) fail(ErrorCode::Domain, "box too small to shrink on axis " + std::to_string(i));

  HeightField next(field.box().shrunk(1), field.epsilon(), field.scaling(), field.step() + 1);
  const auto in = field.values();
  auto out = next.values();
  const Box& nb = next.box();
  const std::int64_t row = nb.extent(d - 1);
  std::vector<double> nbr(2 * static_cast<std::size_t>(d));

  // Odometer over all axes but the last; the last axis is contiguous in both fields.
  Site prefix(nb.lo.begin(), nb.lo.end());
  std::size_t o = 0;
  while (true) {
    std::size_t base = field.index(prefix);
    for (std::int64_t j = 0; j < row; ++j, ++o) {
      const std::size_t c = base + static_cast<std::size_t>(j);
      for (int i = 0; i < d; ++i) {
        const auto s = static_cast<std::size_t>(field.stride(i));
        nbr[2 * i] = in[c + s];
        nbr[2 * i + 1] = in[c - s];
      }
      out[o] = driver.apply(in[c], nbr);
    }
    int axis = d - 2;
    for (; axis >= 0; --axis) {
      if (++prefix[axis] <= nb.hi[axis]) break;
      prefix[axis] = nb.lo[axis];
    }
    if (axis < 0) break;
  }
  return next;
}

Trajectory::Trajectory(Storage storage, std::set<std::int64_t> snapshots)
    : storage_(storage), snapshots_(std::move(snapshots)) {}

void Trajectory::record(HeightField field) {
  const std::int64_t s = field.step();
  if (last_step_ >= 0 && s != last_step_ + 1) fail(ErrorCode::InvalidArgument, "trajectory steps must be consecutive");
  if (last_step_ >= 0 && field.epsilon() != epsilon())
    fail(ErrorCode::InvalidArgument, "trajectory fields must share epsilon");
  last_step_ = s;
  switch (storage_) {
    case Storage::All:
      fields_.insert_or_assign(s, std::move(field));
      break;
    case Storage::LastOnly:
      fields_.clear();
      fields_.insert_or_assign(s, std::move(field));
      break;
    case Storage::Snapshots:
      // The most recent field is always kept so stepping can continue from it.
      if (!fields_.empty()) {
        auto it = std::prev(fields_.end());
        if (!snapshots_.count(it->first)) fields_.erase(it);
      }
      fields_.insert_or_assign(s, std::move(field));
      break;
  }
}

bool Trajectory::has_step(std::int64_t step) const { return fields_.count(step) > 0; }

const HeightField& Trajectory::at_step(std::int64_t step) const {
  auto it = fields_.find(step);
  if (it == fields_.end()) fail(ErrorCode::Domain, "step " + std::to_string(step) + " is not stored in the trajectory");
  return it->second;
}

const HeightField& Trajectory::last() const {
  if (fields_.empty()) fail(ErrorCode::Domain, "trajectory is empty");
  return std::prev(fields_.end())->second;
}

std::int64_t Trajectory::last_step() const { return last_step_; }
double Trajectory::epsilon() const { return last().epsilon(); }
const ScalingMode& Trajectory::scaling() const { return last().scaling(); }

Trajectory evolve(HeightField initial, const Driver& driver, std::int64_t steps, Trajectory::Storage storage,
                  std::set<std::int64_t> snapshots) {
  if (steps < 0) fail(ErrorCode::InvalidArgument, "steps must be nonnegative");
  Trajectory traj(storage, std::move(snapshots));
  traj.record(std::move(initial));
  for (std::int64_t s = 0; s < steps; ++s) traj.record(step(traj.last(), driver));
  return traj;
}

double evaluate_scaled(const Trajectory& trajectory, std::span<const double> x, double t) {
  const std::int64_t k = time_index(t, trajectory.epsilon());
  if (!trajectory.has_step(k)) fail(ErrorCode::Domain, "time outside the stored trajectory");
  const HeightField& f = trajectory.at_step(k);
  if (static_cast<int>(x.size()) != f.dim()) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
  const double h = f.scaling().spacing(f.epsilon());
  Site site(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) site[i] = static_cast<std::int64_t>(std::floor(x[i] / h));
  if (!f.box().contains(site)) fail(ErrorCode::Domain, "point outside the light-cone region");
  return f.at(site);
}

double projected_site_updates(const Box& initial_box, std::int64_t steps) {
  double total = 0.0;
  for (std::int64_t s = 1; s <= steps; ++s) {
    double n = 1.0;
    for (int i = 0; i < initial_box.dim(); ++i) n *= std::max<double>(0.0, static_cast<double>(initial_box.extent(i) - 2 * s));
    total += n;
  }
  return total;
}

}  // namespace growthlab
