#include "swl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>

#include "swl/fft.hpp"
#include "swl/mcstat.hpp"

namespace swl {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::MildDirect: return "mild-direct";
    case Scheme::Spectral: return "spectral";
    case Scheme::Picard: return "picard";
  }
  return "?";
}

bool SolutionField::has_index(int t_index) const {
  return std::binary_search(stored_indices.begin(), stored_indices.end(),
                            t_index);
}

const std::vector<double>& SolutionField::at_index(int t_index) const {
  const auto it = std::lower_bound(stored_indices.begin(),
                                   stored_indices.end(), t_index);
  if (it == stored_indices.end() || *it != t_index)
    throw Error(ErrorKind::IndexOutOfRange,
                "time index " + std::to_string(t_index) + " not stored");
  return slices[static_cast<std::size_t>(it - stored_indices.begin())];
}

namespace {

std::vector<int> resolve_store(const Grid& grid, const SolveOptions& options) {
  std::vector<int> idx = options.store_indices;
  if (idx.empty()) {
    idx.resize(grid.n_steps + 1);
    for (int i = 0; i <= grid.n_steps; ++i) idx[i] = i;
    return idx;
  }
  idx.push_back(0);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.front() < 0 || idx.back() > grid.n_steps)
    throw Error(ErrorKind::IndexOutOfRange, "store index outside [0, N_t]");
  return idx;
}

void check_noise(const Grid& grid, const NoiseIncrements& noise) {
  if (noise.grid.dimension != grid.dimension ||
      noise.grid.points_per_axis != grid.points_per_axis ||
      noise.grid.n_steps < grid.n_steps ||
      std::abs(noise.grid.dt - grid.dt) > 1e-12 ||
      std::abs(noise.grid.half_width - grid.half_width) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "noise does not match grid");
}

void check_finite(const std::vector<double>& slice) {
  for (double v : slice)
    if (!std::isfinite(v))
      throw Error(ErrorKind::NonConvergent, "non-finite solution value");
}

SolutionField make_field(const Grid& grid, Scheme scheme,
                         const SpatialKernel& kernel, const SigmaSpec& sigma,
                         const NoiseIncrements& noise,
                         const std::vector<int>& store) {
  SolutionField f;
  f.grid = grid;
  f.scheme = scheme;
  f.seed = noise.seed;
  f.kernel_name = kernel_family_name(kernel.family);
  f.sigma_name = sigma_family_name(sigma.family);
  f.stored_indices = store;
  f.slices.reserve(store.size());
  return f;
}

}  // namespace

SolutionField solve_spectral(const SpatialKernel& kernel, const Grid& grid,
                             const SigmaSpec& sigma,
                             const NoiseIncrements& noise,
                             const SolveOptions& options) {
  check_noise(grid, noise);
  const auto store = resolve_store(grid, options);
  SolutionField field =
      make_field(grid, Scheme::Spectral, kernel, sigma, noise, store);

  const int n = grid.points_per_axis;
  const std::int64_t N = grid.n_cells();
  const double dt = grid.dt;
  const double vol = grid.cell_volume();
  const double xi0 = kPi / grid.half_width;  // frequency spacing

  // Per-mode free propagator entries.
  std::vector<double> cos_m(N), sin_m(N), wsin_m(N);
  for (std::int64_t m = 0; m < N; ++m) {
    double w;
    if (grid.dimension == 1) {
      const int k = static_cast<int>(m);
      const int kk = k <= n / 2 ? k : k - n;
      w = std::abs(kk * xi0);
    } else {
      const int k1 = static_cast<int>(m / n);
      const int k2 = static_cast<int>(m % n);
      const int kk1 = k1 <= n / 2 ? k1 : k1 - n;
      const int kk2 = k2 <= n / 2 ? k2 : k2 - n;
      w = std::hypot(kk1 * xi0, kk2 * xi0);
    }
    cos_m[m] = std::cos(dt * w);
    sin_m[m] = w == 0.0 ? dt : std::sin(dt * w) / w;
    wsin_m[m] = w * std::sin(dt * w);
  }

  std::vector<std::complex<double>> uh(N, {0.0, 0.0});
  std::vector<std::complex<double>> vh(N, {0.0, 0.0});
  uh[0] = static_cast<double>(N);  // DFT of the all-ones initial condition
  std::vector<std::complex<double>> work(N);
  std::vector<double> u(N, 1.0);

  auto store_it = store.begin();
  if (*store_it == 0) {
    field.slices.push_back(u);
    ++store_it;
  }

  for (int m = 0; m < grid.n_steps; ++m) {
    const auto& dw = noise.values[m];
    for (std::int64_t j = 0; j < N; ++j)
      work[j] = sigma(u[j]) * dw[j] / vol;
    fft_forward(grid.dimension, n, work);
    for (std::int64_t k = 0; k < N; ++k) {
      const std::complex<double> vk = vh[k] + work[k];
      const std::complex<double> uk = uh[k];
      uh[k] = cos_m[k] * uk + sin_m[k] * vk;
      vh[k] = -wsin_m[k] * uk + cos_m[k] * vk;
    }
    work = uh;
    fft_backward(grid.dimension, n, work);
    const double inv_n = 1.0 / static_cast<double>(N);
    for (std::int64_t j = 0; j < N; ++j) u[j] = work[j].real() * inv_n;

    if (store_it != store.end() && *store_it == m + 1) {
      check_finite(u);
      field.slices.push_back(u);
      ++store_it;
    }
  }
  return field;
}

namespace {

// Shared quadrature core of the mild-direct and Picard schemes (d = 1).
// next_slice(n) must return u at time index n given that rows 0..n-1 of
// `source` are the sigma inputs; here we just provide the windowed sums.
class ConeQuadrature {
 public:
  ConeQuadrature(const Grid& grid, const NoiseIncrements& noise)
      : grid_(grid), noise_(noise), n_(grid.points_per_axis) {}

  // prefix[j] = sum_{l < j} s[l], length n+1.
  static void prefix_sums(const std::vector<double>& s,
                          std::vector<double>& prefix) {
    prefix.resize(s.size() + 1);
    prefix[0] = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      prefix[j + 1] = prefix[j] + s[j];
  }

  // Sum of s over the periodic window {i-K, ..., i+K}.
  double window_sum(const std::vector<double>& prefix, int i, int K) const {
    if (2 * K + 1 >= n_) return prefix[n_];
    double sum = 0.0;
    int lo = i - K, hi = i + K;  // inclusive
    if (lo < 0) {
      sum += prefix[n_] - prefix[lo + n_];
      lo = 0;
    }
    if (hi >= n_) {
      sum += prefix[hi - n_ + 1];
      hi = n_ - 1;
    }
    sum += prefix[hi + 1] - prefix[lo];
    return sum;
  }

  // One pass of u(t_n) = 1 + sum over past steps, with sigma applied to the
  // given source field (the evolving field itself, or a frozen iterate).
  void assemble(const SigmaSpec& sigma,
                const std::vector<std::vector<double>>& source,
                std::vector<std::vector<double>>& out) const {
    const int steps = grid_.n_steps;
    const double dx = grid_.dx();
    const double dt = grid_.dt;
    std::vector<double> s(n_), prefix;
    for (auto& row : out) std::fill(row.begin(), row.end(), 1.0);
    for (int m = 0; m < steps; ++m) {
      const auto& dw = noise_.values[m];
      for (int j = 0; j < n_; ++j) s[j] = sigma(source[m][j]) * dw[j];
      prefix_sums(s, prefix);
      for (int nidx = m + 1; nidx <= steps; ++nidx) {
        const double r = (nidx - m) * dt - 0.5 * dt;
        const int K = static_cast<int>(std::floor(r / dx - 1e-12));
        if (K < 0) continue;
        auto& row = out[nidx];
        for (int i = 0; i < n_; ++i)
          row[i] += 0.5 * window_sum(prefix, i, K);
      }
    }
  }

 private:
  const Grid& grid_;
  const NoiseIncrements& noise_;
  int n_;
};

}  // namespace

SolutionField solve_mild_direct(const SpatialKernel& kernel, const Grid& grid,
                                const SigmaSpec& sigma,
                                const NoiseIncrements& noise,
                                const SolveOptions& options) {
  if (grid.dimension != 1)
    throw Error(ErrorKind::DimensionUnsupported,
                "mild-direct quadrature is the d=1 cross-validator");
  check_noise(grid, noise);
  const auto store = resolve_store(grid, options);
  SolutionField field =
      make_field(grid, Scheme::MildDirect, kernel, sigma, noise, store);

  const int n = grid.points_per_axis;
  const int steps = grid.n_steps;
  const double dx = grid.dx();
  const double dt = grid.dt;
  std::vector<std::vector<double>> u(steps + 1, std::vector<double>(n, 1.0));
  ConeQuadrature quad(grid, noise);
  std::vector<double> s(n), prefix;
  // Causal sweep: row n uses sigma of rows < n already finalized.
  for (int m = 0; m < steps; ++m) {
    const auto& dw = noise.values[m];
    for (int j = 0; j < n; ++j) s[j] = sigma(u[m][j]) * dw[j];
    ConeQuadrature::prefix_sums(s, prefix);
    for (int nidx = m + 1; nidx <= steps; ++nidx) {
      const double r = (nidx - m) * dt - 0.5 * dt;
      const int K = static_cast<int>(std::floor(r / dx - 1e-12));
      if (K < 0) continue;
      auto& row = u[nidx];
      for (int i = 0; i < n; ++i) row[i] += 0.5 * quad.window_sum(prefix, i, K);
    }
  }
  for (int idx : store) {
    check_finite(u[idx]);
    field.slices.push_back(u[idx]);
  }
  return field;
}

SolutionField solve_picard(const SpatialKernel& kernel, const Grid& grid,
                           const SigmaSpec& sigma,
                           const NoiseIncrements& noise, int n_iter,
                           const SolveOptions& options) {
  if (grid.dimension != 1)
    throw Error(ErrorKind::DimensionUnsupported, "Picard scheme is d=1 only");
  if (n_iter < 0)
    throw Error(ErrorKind::InvalidArgument, "n_iter must be >= 0");
  check_noise(grid, noise);
  const auto store = resolve_store(grid, options);
  SolutionField field =
      make_field(grid, Scheme::Picard, kernel, sigma, noise, store);
  field.picard_iterations = n_iter;

  const int n = grid.points_per_axis;
  const int steps = grid.n_steps;
  std::vector<std::vector<double>> prev(steps + 1, std::vector<double>(n, 1.0));
  std::vector<std::vector<double>> next(steps + 1, std::vector<double>(n, 1.0));
  ConeQuadrature quad(grid, noise);
  for (int k = 0; k < n_iter; ++k) {
    quad.assemble(sigma, prev, next);
    std::swap(prev, next);
  }
  for (int idx : store) {
    check_finite(prev[idx]);
    field.slices.push_back(prev[idx]);
  }
  return field;
}

MomentEstimate moment_estimate(const std::vector<SolutionField>& replicas,
                               double p, int t_index, std::int64_t cell) {
  if (replicas.size() < 100)
    throw Error(ErrorKind::InsufficientReplicas,
                "moment estimates need >= 100 replicas");
  if (!(p >= 2.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 2");
  std::vector<double> powered(replicas.size());
  for (std::size_t r = 0; r < replicas.size(); ++r) {
    const auto& slice = replicas[r].at_index(t_index);
    powered[r] = std::pow(std::abs(slice[static_cast<std::size_t>(cell)]), p);
  }
  const auto norm_of = [p](const std::vector<double>& v) {
    return std::pow(mean(v), 1.0 / p);
  };
  MomentEstimate est;
  est.value = norm_of(powered);
  est.std_error = bootstrap_se(powered, norm_of, 200, 0x5EED0A11u);
  return est;
}

void write_solution_csv(const SolutionField& field, int t_index,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  const auto& slice = field.at_index(t_index);
  const double t = t_index * field.grid.dt;
  if (field.grid.dimension == 1) {
    out << "t,x1,u\n";
    for (std::int64_t j = 0; j < field.grid.n_cells(); ++j)
      out << t << ',' << field.grid.point(j).x << ',' << slice[j] << '\n';
  } else {
    out << "t,x1,x2,u\n";
    for (std::int64_t j = 0; j < field.grid.n_cells(); ++j) {
      const Vec p = field.grid.point(j);
      out << t << ',' << p.x << ',' << p.y << ',' << slice[j] << '\n';
    }
  }
}

void dump_solution(const SolutionField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  struct Header {
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
  } h{};
  static_assert(sizeof(Header) == 64);
  std::memcpy(h.magic, "SWSL", 4);
  h.version = 1;
  h.dimension = static_cast<std::uint32_t>(field.grid.dimension);
  h.n = static_cast<std::uint32_t>(field.grid.points_per_axis);
  h.n_slices = static_cast<std::uint32_t>(field.slices.size());
  h.half_width = field.grid.half_width;
  h.dt = field.grid.dt;
  h.seed = field.seed;
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  for (const auto& row : field.slices)
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed: " + path);
}

}  // namespace swl
