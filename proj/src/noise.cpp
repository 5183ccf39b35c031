#include "swl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "swl/fft.hpp"

namespace swl {

double gamma_periodic(const SpatialKernel& kernel, const Grid& grid,
                      const Vec& delta) {
  const double span = 2.0 * grid.half_width;
  double sum = 0.0;
  if (grid.dimension == 1) {
    for (int k = -3; k <= 3; ++k)
      sum += gamma_radial(kernel, delta.x + k * span);
  } else {
    for (int k1 = -3; k1 <= 3; ++k1)
      for (int k2 = -3; k2 <= 3; ++k2)
        sum += gamma_radial(kernel, std::hypot(delta.x + k1 * span,
                                               delta.y + k2 * span));
  }
  return sum;
}

CirculantEmbedding make_embedding(const SpatialKernel& kernel,
                                  const Grid& grid) {
  if (kernel.dimension != grid.dimension)
    throw Error(ErrorKind::InvalidArgument,
                "kernel/grid dimension mismatch");
  const int n = grid.points_per_axis;
  const std::int64_t N = grid.n_cells();
  std::vector<std::complex<double>> row(N);
  // First circulant row: wrapped covariance at lag x_j - x_0.
  if (grid.dimension == 1) {
    for (int j = 0; j < n; ++j) {
      const double lag = grid.min_image(j * grid.dx());
      row[j] = gamma_periodic(kernel, grid, Vec{lag, 0.0});
    }
  } else {
    for (int j1 = 0; j1 < n; ++j1) {
      const double l1 = grid.min_image(j1 * grid.dx());
      for (int j2 = 0; j2 < n; ++j2) {
        const double l2 = grid.min_image(j2 * grid.dx());
        row[static_cast<std::int64_t>(j1) * n + j2] =
            gamma_periodic(kernel, grid, Vec{l1, l2});
      }
    }
  }
  fft_forward(grid.dimension, n, row);

  CirculantEmbedding emb{grid, kernel, {}, 0.0, 0.0};
  emb.mode_scale.resize(N);
  double max_eig = 0.0, min_eig = 0.0;
  for (std::int64_t m = 0; m < N; ++m) {
    const double eig = row[m].real();
    max_eig = std::max(max_eig, eig);
    min_eig = std::min(min_eig, eig);
  }
  if (min_eig < -1e-9 * max_eig)
    throw Error(ErrorKind::EmbeddingNotPSD,
                "circulant eigenvalue " + std::to_string(min_eig) +
                    " below -1e-9 * max (" + std::to_string(max_eig) +
                    "); domain too small for this kernel");
  for (std::int64_t m = 0; m < N; ++m) {
    const double eig = std::max(0.0, row[m].real());
    emb.mode_scale[m] = std::sqrt(eig / static_cast<double>(N));
  }
  emb.min_eigenvalue = min_eig;
  emb.max_eigenvalue = max_eig;
  return emb;
}

namespace {

// Fills the spectral array with sqrt(lambda/N) (a + i b) and inverts; the
// real part carries covariance gamma_per (the imaginary part is an
// independent copy that we discard).
void sample_field_into(const CirculantEmbedding& emb, std::uint64_t stream_key,
                       std::vector<std::complex<double>>& work,
                       std::vector<double>& out) {
  const std::int64_t N = emb.grid.n_cells();
  work.resize(N);
  out.resize(N);
  RandomStream stream(stream_key);
  for (std::int64_t m = 0; m < N; ++m) {
    const auto [a, b] = stream.normal_pair(static_cast<std::uint64_t>(m));
    work[m] = std::complex<double>(a * emb.mode_scale[m],
                                   b * emb.mode_scale[m]);
  }
  fft_backward(emb.grid.dimension, emb.grid.points_per_axis, work);
  for (std::int64_t j = 0; j < N; ++j) out[j] = work[j].real();
}

}  // namespace

std::vector<double> sample_field(const CirculantEmbedding& embedding,
                                 std::uint64_t stream_key) {
  std::vector<std::complex<double>> work;
  std::vector<double> out;
  sample_field_into(embedding, stream_key, work, out);
  return out;
}

NoiseIncrements sample_increments(const CirculantEmbedding& embedding,
                                  std::uint64_t seed) {
  const Grid& grid = embedding.grid;
  NoiseIncrements noise{grid, embedding.kernel, seed, {}};
  noise.values.resize(grid.n_steps);
  const double scale =
      std::sqrt(grid.dt) * grid.cell_volume();
  const std::uint64_t base = derive_key(seed, stream_tag::kNoiseStep);
  std::vector<std::complex<double>> work;
  for (int m = 0; m < grid.n_steps; ++m) {
    sample_field_into(embedding, derive_key(base, static_cast<std::uint64_t>(m)),
                      work, noise.values[m]);
    for (double& v : noise.values[m]) v *= scale;
  }
  return noise;
}

NoiseIncrements sample_increments(const SpatialKernel& kernel,
                                  const Grid& grid, std::uint64_t seed) {
  return sample_increments(make_embedding(kernel, grid), seed);
}

NoiseIncrements shift_increments(const NoiseIncrements& noise, int s_index,
                                 const Vec& y, double epsilon) {
  if (s_index < 0 || s_index >= noise.grid.n_steps)
    throw Error(ErrorKind::IndexOutOfRange,
                "shift step index " + std::to_string(s_index) +
                    " outside [0, " + std::to_string(noise.grid.n_steps) + ")");
  NoiseIncrements out = noise;
  if (epsilon == 0.0) return out;
  const Grid& g = noise.grid;
  const double vol = g.cell_volume();
  auto& row = out.values[s_index];
  for (std::int64_t j = 0; j < g.n_cells(); ++j) {
    const Vec p = g.point(j);
    const Vec delta{g.min_image(p.x - y.x),
                    g.dimension == 2 ? g.min_image(p.y - y.y) : 0.0};
    row[j] += epsilon * gamma_at(noise.kernel, delta) * vol;
  }
  return out;
}

namespace {

constexpr char kNoiseMagic[4] = {'S', 'W', 'N', 'Z'};

struct BinaryHeader {
  char magic[4];
  std::uint32_t version;
  std::uint32_t dimension;
  std::uint32_t n;
  std::uint32_t n_slices;
  std::uint32_t pad0;
  double half_width;
  double dt;
  std::uint64_t seed;
  std::uint64_t reserved[2];
};
static_assert(sizeof(BinaryHeader) == 64, "header must be 64 bytes");

}  // namespace

void dump_noise(const NoiseIncrements& noise, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  BinaryHeader h{};
  std::memcpy(h.magic, kNoiseMagic, 4);
  h.version = 1;
  h.dimension = static_cast<std::uint32_t>(noise.grid.dimension);
  h.n = static_cast<std::uint32_t>(noise.grid.points_per_axis);
  h.n_slices = static_cast<std::uint32_t>(noise.grid.n_steps);
  h.half_width = noise.grid.half_width;
  h.dt = noise.grid.dt;
  h.seed = noise.seed;
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  for (const auto& row : noise.values)
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed: " + path);
}

NoiseIncrements load_noise(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  BinaryHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in || std::memcmp(h.magic, kNoiseMagic, 4) != 0)
    throw Error(ErrorKind::InvalidArgument, "bad noise dump header");
  Grid grid = Grid::make(static_cast<int>(h.dimension), h.half_width,
                         static_cast<int>(h.n), h.dt,
                         static_cast<int>(h.n_slices));
  NoiseIncrements noise{grid, SpatialKernel{}, h.seed, {}};
  noise.values.assign(grid.n_steps,
                      std::vector<double>(static_cast<std::size_t>(grid.n_cells())));
  for (auto& row : noise.values) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!in) throw Error(ErrorKind::InvalidArgument, "truncated noise dump");
  return noise;
}

}  // namespace swl
