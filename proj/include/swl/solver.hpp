#ifndef SWL_SOLVER_HPP
#define SWL_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "swl/grid.hpp"
#include "swl/noise.hpp"
#include "swl/sigma.hpp"

namespace swl {

enum class Scheme { MildDirect, Spectral, Picard };

const char* scheme_name(Scheme s);

// Solution u on the grid at a set of stored time indices.  Slice 0 is the
// initial condition u(0,.) == 1 and is always stored.
struct SolutionField {
  Grid grid;
  Scheme scheme = Scheme::Spectral;
  int picard_iterations = 0;
  std::uint64_t seed = 0;
  std::string kernel_name;
  std::string sigma_name;
  std::vector<int> stored_indices;
  std::vector<std::vector<double>> slices;

  bool has_index(int t_index) const;
  const std::vector<double>& at_index(int t_index) const;
};

struct SolveOptions {
  // Time indices to keep; empty means all of 0..N_t.
  std::vector<int> store_indices;
};

// Fourier-multiplier stepper: exact free-wave propagator per step, noise
// injected as a velocity kick at the start of each step.  Works in d = 1, 2.
SolutionField solve_spectral(const SpatialKernel& kernel, const Grid& grid,
                             const SigmaSpec& sigma,
                             const NoiseIncrements& noise,
                             const SolveOptions& options = {});

// Full-history quadrature of the mild equation (d = 1 cross-validator):
//   u(t_n, x_i) = 1 + sum_{m<n} sum_j G_{t_n - t_m - dt/2}(x_i - x_j)
//                     sigma(u(t_m, x_j)) dW_{m,j}.
SolutionField solve_mild_direct(const SpatialKernel& kernel, const Grid& grid,
                                const SigmaSpec& sigma,
                                const NoiseIncrements& noise,
                                const SolveOptions& options = {});

// Picard iteration of the same quadrature with the previous iterate frozen
// inside sigma; u_0 == 1.  d = 1, small grids.
SolutionField solve_picard(const SpatialKernel& kernel, const Grid& grid,
                           const SigmaSpec& sigma,
                           const NoiseIncrements& noise, int n_iter,
                           const SolveOptions& options = {});

// Monte Carlo estimate of ||u(t, x)||_p over a replica set, with a bootstrap
// standard error.  Requires >= 100 replicas.
struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
MomentEstimate moment_estimate(const std::vector<SolutionField>& replicas,
                               double p, int t_index, std::int64_t cell);

// CSV snapshot (t, x1[, x2], u) of one stored slice.
void write_solution_csv(const SolutionField& field, int t_index,
                        const std::string& path);
// Binary dump mirroring the noise format, magic "SWSL".
void dump_solution(const SolutionField& field, const std::string& path);

}  // namespace swl

#endif
