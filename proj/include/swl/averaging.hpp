#ifndef SWL_AVERAGING_HPP
#define SWL_AVERAGING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "swl/solver.hpp"

namespace swl {

// Exact area of {x in [x1,x2], y in [y1,y2], x^2 + y^2 <= R^2}.
double disc_rect_overlap(double R, double x1, double x2, double y1, double y2);

// Cell-in-ball volume fractions for B_R on the grid.  Boundary cells carry
// their exact overlap fraction, so spatial averages have no staircase bias.
struct BallWeights {
  double R = 0.0;
  std::vector<double> w;        // fraction in [0,1] per cell
  double weighted_volume = 0.0; // sum w_j * dx^d  (= |B_R| up to roundoff)
};

BallWeights make_ball_weights(const Grid& grid, double R);

// F_R(t) = int_{B_R} (u(t,x) - 1) dx, cell-weighted.
double f_r(const SolutionField& solution, const SpatialKernel& kernel,
           const BallWeights& weights, int t_index);
double f_r(const SolutionField& solution, const SpatialKernel& kernel,
           double R, int t_index);

// Bounded Lipschitz probes for ergodic averages.
enum class Probe { One, VMinusOne, TanhVMinusOne, SinV };
const char* probe_name(Probe p);
Probe probe_from_name(const std::string& name);
double probe_apply(Probe p, double v);

// R^{-d} int_{B_R} g(u(t,x)) dx.
double ergodic_average(const SolutionField& solution,
                       const SpatialKernel& kernel, Probe g,
                       const BallWeights& weights, int t_index);
double ergodic_average(const SolutionField& solution,
                       const SpatialKernel& kernel, Probe g, double R,
                       int t_index);

struct AverageSample {
  double R = 0.0;
  double t = 0.0;
  int replica = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
};

void write_average_samples_csv(const std::vector<AverageSample>& samples,
                               const std::string& path);

}  // namespace swl

#endif
