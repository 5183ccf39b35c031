#include "swl/grid.hpp"

#include <cmath>

namespace swl {

Grid Grid::make(int dimension, double half_width, int points_per_axis,
                double dt, int n_steps) {
  if (dimension != 1 && dimension != 2)
    throw Error(ErrorKind::InvalidArgument, "grid dimension must be 1 or 2");
  if (!(half_width > 0.0))
    throw Error(ErrorKind::InvalidArgument, "half_width must be positive");
  if (!is_power_of_two(points_per_axis))
    throw Error(ErrorKind::InvalidArgument,
                "points_per_axis must be a power of two");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (n_steps < 1)
    throw Error(ErrorKind::InvalidArgument, "n_steps must be >= 1");
  return Grid{dimension, half_width, points_per_axis, dt, n_steps};
}

void check_lightcone(const Grid& grid, double r_max, double t_max,
                     const SpatialKernel& kernel) {
  const double need = r_max + t_max + effective_range(kernel);
  if (grid.half_width + 1e-12 < need)
    throw Error(ErrorKind::BallExceedsDomain,
                "domain half-width " + std::to_string(grid.half_width) +
                    " smaller than R + T + pad = " + std::to_string(need));
}

Grid auto_grid(int dimension, double dx, double dt, double R, double t,
               const SpatialKernel& kernel) {
  if (!(dx > 0.0) || !(dt > 0.0))
    throw Error(ErrorKind::InvalidArgument, "dx and dt must be positive");
  const double x_min = R + t + effective_range(kernel);
  int n = 2;
  while (n * dx / 2.0 < x_min) {
    n *= 2;
    if (n > (1 << 24))
      throw Error(ErrorKind::InvalidArgument, "auto grid too large");
  }
  const double X = n * dx / 2.0;
  const int steps = time_index(Grid{dimension, X, n, dt, 1}, t);
  return Grid::make(dimension, X, n, dt, std::max(1, steps));
}

int time_index(const Grid& grid, double t) {
  const double k = t / grid.dt;
  const int idx = static_cast<int>(std::lround(k));
  if (std::abs(k - idx) > 1e-9)
    throw Error(ErrorKind::InvalidArgument,
                "time " + std::to_string(t) + " is not a multiple of dt");
  return idx;
}

}  // namespace swl
