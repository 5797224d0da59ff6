#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "growthlab/initial_data.hpp"

namespace growthlab {

class Driver;

using Site = std::vector<std::int64_t>;

enum class ScalingKind { Hyperbolic, Parabolic };

/// Space scale of the rescaled height: hyperbolic uses eps, parabolic sqrt(eps).
struct ScalingMode {
  ScalingKind kind = ScalingKind::Hyperbolic;

  static ScalingMode hyperbolic() { return {ScalingKind::Hyperbolic}; }
  static ScalingMode parabolic() { return {ScalingKind::Parabolic}; }

  double space_exponent() const noexcept { return kind == ScalingKind::Hyperbolic ? 1.0 : 0.5; }
  /// Lattice spacing in continuum units for a given eps.
  double spacing(double epsilon) const;

  bool operator==(const ScalingMode&) const = default;
};

const char* to_string(ScalingKind kind);

/// Closed integer box [lo, hi] per axis.
struct Box {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  int dim() const noexcept { return static_cast<int>(lo.size()); }
  std::int64_t extent(int axis) const { return hi[axis] - lo[axis] + 1; }
  std::size_t size() const;
  bool contains(std::span<const std::int64_t> site) const;
  bool contains(const Box& inner) const;
  Box shrunk(std::int64_t cells = 1) const;
  Box grown(std::int64_t cells = 1) const;

  bool operator==(const Box&) const = default;
};

/// Continuum box [lo_i, hi_i] per axis.
struct Window {
  std::vector<double> lo;
  std::vector<double> hi;

  static Window cube(int dim, double lo, double hi);
  int dim() const noexcept { return static_cast<int>(lo.size()); }
};

/// Heights on a finite lattice box at one discrete time. Values are stored
/// row-major with the last axis contiguous.
class HeightField {
 public:
  HeightField(Box box, double epsilon, ScalingMode scaling, std::int64_t step = 0);

  int dim() const noexcept { return box_.dim(); }
  const Box& box() const noexcept { return box_; }
  std::int64_t step() const noexcept { return step_; }
  double epsilon() const noexcept { return epsilon_; }
  const ScalingMode& scaling() const noexcept { return scaling_; }

  double at(std::span<const std::int64_t> site) const;
  double& at(std::span<const std::int64_t> site);

  std::size_t index(std::span<const std::int64_t> site) const;
  std::int64_t stride(int axis) const { return strides_[axis]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Calls fn(site, value&) for every site in box order.
  template <class Fn>
  void for_each_site(Fn&& fn);

  bool operator==(const HeightField&) const = default;

 private:
  Box box_;
  double epsilon_;
  ScalingMode scaling_;
  std::int64_t step_;
  std::vector<std::int64_t> strides_;
  std::vector<double> values_;
};

/// floor(t / eps), snapping quotients within 1e-9 (relative) of an integer.
std::int64_t time_index(double t, double epsilon);

/// Lattice image of a continuum window: floor(lo/h) .. ceil(hi/h) per axis.
Box window_image(const Window& window, double spacing);

/// Step-0 field on the window image expanded by `steps` cells on every face,
/// with values u0(h * x), h = eps^space_exponent.
HeightField init_field(const InitialData& u0, const Window& window, std::int64_t steps,
                       double epsilon, ScalingMode scaling);

/// One growth step. The result lives on the box shrunk by one cell per face;
/// the input is not modified.
HeightField step(const HeightField& field, const Driver& driver);

/// Evolution record. Keeps every step (All), only the most recent (LastOnly),
/// or a chosen set of steps (Snapshots).
class Trajectory {
 public:
  enum class Storage { All, LastOnly, Snapshots };

  explicit Trajectory(Storage storage = Storage::All, std::set<std::int64_t> snapshots = {});

  void record(HeightField field);
  bool has_step(std::int64_t step) const;
  const HeightField& at_step(std::int64_t step) const;
  const HeightField& last() const;
  std::size_t stored() const noexcept { return fields_.size(); }
  std::int64_t last_step() const;

  double epsilon() const;
  const ScalingMode& scaling() const;

 private:
  Storage storage_;
  std::set<std::int64_t> snapshots_;
  std::map<std::int64_t, HeightField> fields_;
  std::int64_t last_step_ = -1;
};

/// Run `steps` growth steps from `initial`, recording into a trajectory.
Trajectory evolve(HeightField initial, const Driver& driver, std::int64_t steps,
                  Trajectory::Storage storage = Trajectory::Storage::All,
                  std::set<std::int64_t> snapshots = {});

/// Rescaled height u^eps(x, t) = u(floor(x / h), floor(t / eps)).
double evaluate_scaled(const Trajectory& trajectory, std::span<const double> x, double t);

/// Number of site updates needed to advance a field initialized with the
/// given light-cone box by `steps` steps.
double projected_site_updates(const Box& initial_box, std::int64_t steps);

// ---------------------------------------------------------------------------

template <class Fn>
void HeightField::for_each_site(Fn&& fn) {
  const int d = dim();
  Site site(box_.lo.begin(), box_.lo.end());
  for (double& v : values_) {
    fn(std::span<const std::int64_t>(site), v);
    for (int axis = d - 1; axis >= 0; --axis) {
      if (++site[axis] <= box_.hi[axis]) break;
      site[axis] = box_.lo[axis];
    }
  }
}

}  // namespace growthlab
