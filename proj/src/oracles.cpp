#include "growthlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

// Calls fn(idx) for every integer vector idx in [-n, n]^d.
template <class Fn>
void for_each_offset(int d, int n, Fn&& fn) {
  std::vector<int> idx(d, -n);
  while (true) {
    fn(idx);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++idx[a] <= n) break;
      idx[a] = -n;
    }
    if (a < 0) break;
  }
}

// Membership of the integer vector m in the scaled set n*K.
bool inside(Hamiltonian ham, std::span<const int> m, long n) {
  if (ham == Hamiltonian::HJMax) {
    long s = 0;
    for (int v : m) s += std::abs(v);
    return s <= n;
  }
  for (int v : m)
    if (std::abs(v) > n) return false;
  return true;
}

}  // namespace

double hopf_lax_oracle(Hamiltonian ham, const InitialData& u0, std::span<const double> x, double t, double resolution) {
  if (!(t >= 0.0)) fail(ErrorCode::Domain, "time must be nonnegative");
  if (t == 0.0) return u0(x);
  if (!(resolution > 0.0)) fail(ErrorCode::InvalidArgument, "resolution must be positive");
  const int d = static_cast<int>(x.size());
  const double radius = ham == Hamiltonian::HJMax ? t : t / (2.0 * d);
  const int nc = std::max(2, static_cast<int>(std::ceil(radius / (kHopfLaxRefinement * resolution))));
  const double hc = radius / nc;

  std::vector<double> y(d);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_idx(d, 0);
  for_each_offset(d, nc, [&](const std::vector<int>& i) {
    if (!inside(ham, i, nc)) return;
    for (int a = 0; a < d; ++a) y[a] = x[a] + hc * i[a];
    const double v = u0(y);
    if (v > best) {
      best = v;
      best_idx = i;
    }
  });

  const int r = kHopfLaxRefinement;
  const double hf = hc / r;
  std::vector<int> m(d);
  for_each_offset(d, r, [&](const std::vector<int>& j) {
    for (int a = 0; a < d; ++a) m[a] = r * best_idx[a] + j[a];
    if (!inside(ham, m, static_cast<long>(r) * nc)) return;
    for (int a = 0; a < d; ++a) y[a] = x[a] + hf * m[a];
    best = std::max(best, u0(y));
  });
  return best;
}

double separable_heat_oracle(std::span<const double> modes, double diffusivity, double x1, double t) {
  if (!(t >= 0.0)) fail(ErrorCode::Domain, "time must be nonnegative");
  if (!(diffusivity >= 0.0)) fail(ErrorCode::InvalidArgument, "diffusivity must be nonnegative");
  double s = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double mm = static_cast<double>(m);
    s += modes[m] * std::exp(-diffusivity * mm * mm * t) * std::cos(mm * x1);
  }
  return s;
}

double separable_heat_oracle(const InitialData& u0, double diffusivity, double x1, double t) {
  if (!u0.cosine_modes) fail(ErrorCode::Domain, "initial data " + u0.name + " is not a cosine series in x1");
  return separable_heat_oracle(*u0.cosine_modes, diffusivity, x1, t);
}

std::size_t FdGrid::points() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(cells + 1);
  return n;
}

double FdSolution::interpolate(std::span<const double> x) const {
  const int d = grid.dim;
  if (static_cast<int>(x.size()) != d) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
  const double dx = grid.spacing();
  const int n = grid.cells + 1;
  std::vector<int> base(d);
  std::vector<double> frac(d);
  for (int a = 0; a < d; ++a) {
    const double s = (x[a] - grid.lo) / dx;
    if (s < -1e-9 || s > grid.cells + 1e-9) fail(ErrorCode::Domain, "point outside the fd grid");
    int i = std::clamp(static_cast<int>(std::floor(s)), 0, grid.cells - 1);
    base[a] = i;
    frac[a] = std::clamp(s - i, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::size_t k = 0;
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      w *= bit ? frac[a] : 1.0 - frac[a];
      k = k * static_cast<std::size_t>(n) + static_cast<std::size_t>(base[a] + bit);
    }
    if (w != 0.0) sum += w * values[k];
  }
  return sum;
}

namespace {

struct FdLayout {
  int d;
  int n;
  std::vector<std::size_t> stride;

  explicit FdLayout(const FdGrid& g) : d(g.dim), n(g.cells + 1), stride(g.dim, 1) {
    for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * static_cast<std::size_t>(n);
  }
  int coord(std::size_t k, int a) const { return static_cast<int>((k / stride[a]) % static_cast<std::size_t>(n)); }
};

// Max one-sided difference quotient along each axis.
std::vector<double> gradient_bounds(const FdGrid& grid, std::span<const double> u) {
  const FdLayout L(grid);
  const double dx = grid.spacing();
  std::vector<double> g(grid.dim, 0.0);
  for (std::size_t k = 0; k < u.size(); ++k)
    for (int a = 0; a < grid.dim; ++a)
      if (L.coord(k, a) + 1 < L.n) g[a] = std::max(g[a], std::abs(u[k + L.stride[a]] - u[k]) / dx);
  return g;
}

std::vector<double> dissipation(const SmoothAH& op, std::span<const double> grad_bound) {
  const int d = op.dim();
  std::vector<double> alpha(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) alpha[i] += 2.0 * std::abs(op.H(i, j)) * grad_bound[j];
  return alpha;
}

void validate_grid(const SmoothAH& op, const FdGrid& grid) {
  if (grid.dim != op.dim()) fail(ErrorCode::InvalidArgument, "fd grid and operator dimensions differ");
  if (grid.cells < 2 || !(grid.hi > grid.lo)) fail(ErrorCode::InvalidArgument, "fd grid needs >= 2 cells and lo < hi");
  for (int i = 0; i < op.dim(); ++i)
    for (int j = 0; j < op.dim(); ++j)
      if (i != j && op.A(i, j) != 0.0) fail(ErrorCode::InvalidArgument, "fd solver needs a diagonal A");
}

}  // namespace

double fd_cfl_bound(const SmoothAH& op, const FdGrid& grid, std::span<const double> initial_values, double c_cfl) {
  validate_grid(op, grid);
  const double dx = grid.spacing();
  const std::vector<double> alpha = dissipation(op, gradient_bounds(grid, initial_values));
  double denom = 0.0;
  for (int i = 0; i < grid.dim; ++i) denom += 2.0 * op.A(i, i) + dx * alpha[i];
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return c_cfl * dx * dx / denom;
}

std::vector<FdSolution> fd_cross_solver(const SmoothAH& op, const InitialData& u0, const FdGrid& grid,
                                        std::span<const double> times, const FdOptions& options) {
  validate_grid(op, grid);
  for (int i = 0; i < op.dim(); ++i)
    if (op.A(i, i) < 0.0) fail(ErrorCode::InvalidArgument, "fd solver needs A >= 0");
  const FdLayout L(grid);
  const int d = grid.dim;
  const double dx = grid.spacing();

  std::vector<double> u(grid.points());
  std::vector<double> x(d);
  for (std::size_t k = 0; k < u.size(); ++k) {
    for (int a = 0; a < d; ++a) x[a] = grid.lo + dx * L.coord(k, a);
    u[k] = u0(x);
  }
  const std::vector<double> alpha = dissipation(op, gradient_bounds(grid, u));
  const double bound = fd_cfl_bound(op, grid, u, options.c_cfl);
  if (options.dt > 0.0 && options.dt > bound * (1.0 + 1e-12))
    fail(ErrorCode::InvalidArgument, "time step " + std::to_string(options.dt) + " violates the CFL bound " +
                                         std::to_string(bound));

  std::vector<double> next(u.size()), pbar(d), sec(d), jump(d);
  auto advance = [&](double dt) {
    for (std::size_t k = 0; k < u.size(); ++k) {
      for (int a = 0; a < d; ++a) {
        const int c = L.coord(k, a);
        // Mirror ghost points at both ends.
        const double up = c + 1 < L.n ? u[k + L.stride[a]] : u[k - L.stride[a]];
        const double dn = c > 0 ? u[k - L.stride[a]] : u[k + L.stride[a]];
        const double pp = (up - u[k]) / dx, pm = (u[k] - dn) / dx;
        pbar[a] = 0.5 * (pp + pm);
        jump[a] = 0.5 * (pp - pm);
        sec[a] = (up - 2.0 * u[k] + dn) / (dx * dx);
      }
      double rate = op.H.quadratic_form(pbar);
      for (int a = 0; a < d; ++a) rate += op.A(a, a) * sec[a] + alpha[a] * jump[a];
      next[k] = u[k] + dt * rate;
    }
    u.swap(next);
  };

  std::vector<FdSolution> out;
  double now = 0.0;
  std::int64_t total = 0;
  for (double target : times) {
    if (!(target >= now)) fail(ErrorCode::InvalidArgument, "fd output times must be nonnegative and nondecreasing");
    const double len = target - now;
    std::int64_t n = 0;
    if (len > 0.0) {
      const double dt_max = options.dt > 0.0 ? options.dt : bound;
      n = std::isfinite(dt_max) ? static_cast<std::int64_t>(std::ceil(len / dt_max - 1e-9)) : 1;
      n = std::max<std::int64_t>(n, 1);
    }
    const double dt = n > 0 ? len / static_cast<double>(n) : 0.0;
    for (std::int64_t s = 0; s < n; ++s) advance(dt);
    total += n;
    now = target;
    out.push_back(FdSolution{grid, target, dt, total, u});
  }
  return out;
}

}  // namespace growthlab
