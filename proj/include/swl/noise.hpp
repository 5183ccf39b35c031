#ifndef SWL_NOISE_HPP
#define SWL_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "swl/grid.hpp"
#include "swl/kernels.hpp"
#include "swl/rng.hpp"

namespace swl {

// Circulant embedding of the wrapped kernel covariance on the simulation
// torus.  Built once per (kernel, grid) and shared across replicas/threads.
struct CirculantEmbedding {
  Grid grid;
  SpatialKernel kernel;
  // sqrt(lambda_m / N) per Fourier mode; negative eigenvalues above the
  // -1e-9*max floor are clipped to zero, anything below throws.
  std::vector<double> mode_scale;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

CirculantEmbedding make_embedding(const SpatialKernel& kernel,
                                  const Grid& grid);

// Periodic wrap of gamma at the given displacement (sum over a few images;
// the mandated light-cone padding makes further images negligible).
double gamma_periodic(const SpatialKernel& kernel, const Grid& grid,
                      const Vec& delta);

// One zero-mean stationary Gaussian field with Cov(f_j, f_k) =
// gamma_per(x_j - x_k).  Deterministic in (embedding, stream key).
std::vector<double> sample_field(const CirculantEmbedding& embedding,
                                 std::uint64_t stream_key);

// Cell-integrated noise increments: values[m][j] ~ field * sqrt(dt) * dx^d,
// independent across steps, Cov(dW_{m,j}, dW_{m,k}) = dt gamma dx^{2d}.
struct NoiseIncrements {
  Grid grid;
  SpatialKernel kernel;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> values;  // [step][cell]
};

NoiseIncrements sample_increments(const CirculantEmbedding& embedding,
                                  std::uint64_t seed);
NoiseIncrements sample_increments(const SpatialKernel& kernel,
                                  const Grid& grid, std::uint64_t seed);

// Cameron-Martin shift in the direction of a point mass at (s_index, y):
// dW'_{m,j} = dW_{m,j} + eps * delta_{m,s} * gamma(x_j - y) * dx^d.
NoiseIncrements shift_increments(const NoiseIncrements& noise, int s_index,
                                 const Vec& y, double epsilon);

// Binary dump: 64-byte header (magic "SWNZ", version, d, n, N_t, X, dt,
// seed), then little-endian f64 payload, row-major [step][cell].
void dump_noise(const NoiseIncrements& noise, const std::string& path);
NoiseIncrements load_noise(const std::string& path);

}  // namespace swl

#endif
