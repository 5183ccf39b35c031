#ifndef SWL_GRID_HPP
#define SWL_GRID_HPP

#include <cstdint>

#include "swl/common.hpp"
#include "swl/kernels.hpp"

namespace swl {

// Space-time discretization of the periodic box [-X, X)^d.  Grid points sit
// at x_j = -X + j*dx and own the cell [x_j - dx/2, x_j + dx/2).
struct Grid {
  int dimension = 1;
  double half_width = 0.0;  // X
  int points_per_axis = 0;  // n, power of two
  double dt = 0.0;
  int n_steps = 0;  // N_t

  double dx() const { return 2.0 * half_width / points_per_axis; }
  double cell_volume() const {
    return dimension == 1 ? dx() : dx() * dx();
  }
  std::int64_t n_cells() const {
    const std::int64_t n = points_per_axis;
    return dimension == 1 ? n : n * n;
  }
  double horizon() const { return dt * n_steps; }

  double coord(int j) const { return -half_width + j * dx(); }

  // Displacement wrapped to [-X, X).
  double min_image(double delta) const {
    const double span = 2.0 * half_width;
    delta = std::fmod(delta, span);
    if (delta < -half_width) delta += span;
    if (delta >= half_width) delta -= span;
    return delta;
  }

  Vec point(std::int64_t cell) const {
    if (dimension == 1) return Vec{coord(static_cast<int>(cell)), 0.0};
    const int n = points_per_axis;
    return Vec{coord(static_cast<int>(cell / n)),
               coord(static_cast<int>(cell % n))};
  }

  // dt <= dx is advisory for resolution; reported, not enforced.
  bool cfl_ok() const { return dt <= dx() + 1e-12; }

  static Grid make(int dimension, double half_width, int points_per_axis,
                   double dt, int n_steps);
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// X >= R_max + T + pad(kernel); throws BallExceedsDomain otherwise.
void check_lightcone(const Grid& grid, double r_max, double t_max,
                     const SpatialKernel& kernel);

// Auto-sizes the box for an observation ball of radius R at horizon t:
// X_min = R + t + pad, n rounded up to a power of two at fixed dx.
Grid auto_grid(int dimension, double dx, double dt, double R, double t,
               const SpatialKernel& kernel);

// Maps a physical time to a step index; the time must sit on the time grid.
int time_index(const Grid& grid, double t);

}  // namespace swl

#endif
