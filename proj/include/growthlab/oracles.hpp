#pragma once

#include <span>
#include <vector>

#include "growthlab/initial_data.hpp"
#include "growthlab/lattice.hpp"
#include "growthlab/limit_operators.hpp"

namespace growthlab {

enum class Hamiltonian { HJMax, HJPosPart };

/// Refinement factor between the coarse Hopf-Lax search and `resolution`.
inline constexpr int kHopfLaxRefinement = 8;

/// Exact solution of u_t = H(Du) for the positively homogeneous H above:
/// sup of u0 over x + t K, with K the l1 unit ball (HJMax) or the cube
/// [-1/2d, 1/2d]^d (HJPosPart). Grid search at 8*resolution, then one local
/// refinement at `resolution`.
double hopf_lax_oracle(Hamiltonian hamiltonian, const InitialData& u0, std::span<const double> x,
                       double t, double resolution);

/// sum_m c_m exp(-D m^2 t) cos(m x1) for u0 = sum_m c_m cos(m x1).
double separable_heat_oracle(std::span<const double> modes, double diffusivity, double x1, double t);
/// Same, taking the modes from u0; fails if u0 is not a cosine series in x_1.
double separable_heat_oracle(const InitialData& u0, double diffusivity, double x1, double t);

inline constexpr double kDefaultCfl = 0.4;

/// Vertex grid on a cube: `cells` intervals per axis.
struct FdGrid {
  int dim = 1;
  double lo = 0.0;
  double hi = 1.0;
  int cells = 1;

  double spacing() const { return (hi - lo) / cells; }
  std::size_t points() const;
};

struct FdSolution {
  FdGrid grid;
  double time = 0.0;
  double dt = 0.0;
  std::int64_t steps = 0;
  std::vector<double> values;

  /// Multilinear interpolation; points outside the grid are an error.
  double interpolate(std::span<const double> x) const;
};

struct FdOptions {
  double c_cfl = kDefaultCfl;
  /// When positive, use this time step (checked against the CFL bound).
  double dt = 0.0;
};

/// Explicit monotone scheme for u_t = trace(A D^2u) + H(Du): centred second
/// differences, local Lax-Friedrichs Hamiltonian, mirror boundaries. Returns
/// the solution at each requested time (nondecreasing).
std::vector<FdSolution> fd_cross_solver(const SmoothAH& op, const InitialData& u0, const FdGrid& grid,
                                        std::span<const double> times, const FdOptions& options = {});

/// Largest admissible dt for the grid and data.
double fd_cfl_bound(const SmoothAH& op, const FdGrid& grid, std::span<const double> initial_values,
                    double c_cfl);

}  // namespace growthlab
