#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "swl/averaging.hpp"
#include "swl/mcstat.hpp"
#include "swl/rng.hpp"
#include "swl/stats.hpp"

using namespace swl;

namespace {

SpatialKernel tri1() {
  return SpatialKernel::make(KernelFamily::Triangle1D, 1.0, 1.0, 1);
}

SolutionField constant_field(const Grid& g, double value) {
  SolutionField f;
  f.grid = g;
  f.kernel_name = "triangle-1d";
  f.sigma_name = "affine";
  f.stored_indices = {0, g.n_steps};
  f.slices.assign(2, std::vector<double>(static_cast<std::size_t>(g.n_cells()),
                                         value));
  for (auto& v : f.slices[0]) v = 1.0;  // initial condition
  return f;
}

}  // namespace

TEST_CASE("disc-rectangle overlap is exact") {
  // tiling the bounding box of the disc reproduces pi R^2
  for (double R : {0.8, 1.7, 3.0}) {
    const int nb = 37;  // deliberately not aligned with the disc
    const double w = 2.2 * R / nb;
    double total = 0.0;
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        total += disc_rect_overlap(R, -1.1 * R + i * w, -1.1 * R + (i + 1) * w,
                                   -1.1 * R + j * w, -1.1 * R + (j + 1) * w);
    CHECK(total == doctest::Approx(kPi * R * R).epsilon(1e-12));
  }
  // random cells against fine subsampling
  RandomStream stream(5);
  std::uint64_t ctr = 0;
  for (int i = 0; i < 30; ++i) {
    const auto [a, b] = stream.uniform_pair(ctr++);
    const auto [c, d] = stream.uniform_pair(ctr++);
    const double R = 1.0;
    const double x1 = 2.4 * (a - 0.5), y1 = 2.4 * (b - 0.5);
    const double x2 = x1 + 0.05 + 0.8 * c, y2 = y1 + 0.05 + 0.8 * d;
    double mc = 0.0;
    const int nn = 400;
    for (int p = 0; p < nn; ++p)
      for (int q = 0; q < nn; ++q) {
        const double px = x1 + (p + 0.5) * (x2 - x1) / nn;
        const double py = y1 + (q + 0.5) * (y2 - y1) / nn;
        if (px * px + py * py <= R * R) mc += 1.0;
      }
    mc *= (x2 - x1) * (y2 - y1) / (nn * nn);
    CHECK(disc_rect_overlap(R, x1, x2, y1, y2) ==
          doctest::Approx(mc).epsilon(0.02));
  }
}

TEST_CASE("ball weights sum to the ball volume") {
  const Grid g1 = Grid::make(1, 8.0, 256, 0.05, 4);
  const auto w1 = make_ball_weights(g1, 3.3);
  CHECK(w1.weighted_volume == doctest::Approx(2.0 * 3.3).epsilon(1e-12));
  const Grid g2 = Grid::make(2, 8.0, 128, 0.05, 4);
  const auto w2 = make_ball_weights(g2, 3.3);
  CHECK(w2.weighted_volume == doctest::Approx(kPi * 3.3 * 3.3).epsilon(1e-9));
}

TEST_CASE("f_r trivial and structural properties") {
  const auto k = tri1();
  const Grid g = Grid::make(1, 8.0, 256, 0.05, 20);
  const auto ones = constant_field(g, 1.0);
  for (double R : {1.0, 2.0, 5.0})
    CHECK(f_r(ones, k, R, g.n_steps) == 0.0);

  const auto noise = sample_increments(k, g, 99);
  const auto field = solve_spectral(k, g, SigmaSpec::identity(), noise);
  CHECK(f_r(field, k, 4.0, 0) == 0.0);  // initial condition

  // linearity: scaling u-1 scales F_R
  SolutionField scaled = field;
  for (auto& slice : scaled.slices)
    for (double& v : slice) v = 1.0 + 2.5 * (v - 1.0);
  CHECK(f_r(scaled, k, 4.0, 20) ==
        doctest::Approx(2.5 * f_r(field, k, 4.0, 20)).epsilon(1e-12));

  // nested balls: |F_{R2} - F_{R1}| <= shell volume * max|u-1|
  double max_dev = 0.0;
  for (double v : field.at_index(20)) max_dev = std::max(max_dev, std::abs(v - 1.0));
  const double f1 = f_r(field, k, 3.0, 20), f2 = f_r(field, k, 5.0, 20);
  CHECK(std::abs(f2 - f1) <= 2.0 * (5.0 - 3.0) * max_dev + 1e-12);

  // ball + cone must fit inside the domain
  CHECK_THROWS_AS(f_r(field, k, 7.5, 20), Error);
}

TEST_CASE("additive variance of F_R matches the phi-quadrature oracle") {
  const auto k = tri1();
  const double t = 1.0, R = 8.0;
  const Grid g = auto_grid(1, 0.05, 0.05, R, t, k);
  const auto emb = make_embedding(k, g);
  const auto weights = make_ball_weights(g, R);
  const auto sig = SigmaSpec::affine(1.0, 0.0);
  const int reps = 6000;
  const int t_idx = time_index(g, t);
  SolveOptions opts;
  opts.store_indices = {t_idx};
  std::vector<double> samples(reps);
  for (int r = 0; r < reps; ++r) {
    const auto noise = sample_increments(emb, derive_key(808080, r));
    samples[r] =
        f_r(solve_spectral(k, g, sig, noise, opts), k, weights, t_idx);
  }
  const double var_mc = sample_variance(samples);
  const double oracle = test::f_r_variance_oracle_1d(k, 1.0, R, t, g.dt);
  CHECK(std::abs(var_mc - oracle) <= 4.0 * var_mc * std::sqrt(2.0 / reps));
}

TEST_CASE("ergodic averages") {
  const auto k = tri1();
  const Grid g = Grid::make(1, 8.0, 256, 0.05, 10);
  const auto ones = constant_field(g, 1.0);
  // probe g == 1 recovers the normalized ball volume omega_d
  CHECK(ergodic_average(ones, k, Probe::One, 4.0, g.n_steps) ==
        doctest::Approx(2.0).epsilon(1e-9));
  const Grid g2d = Grid::make(2, 8.0, 128, 0.05, 2);
  SolutionField ones2;
  ones2.grid = g2d;
  ones2.stored_indices = {0, 2};
  ones2.slices.assign(2, std::vector<double>(static_cast<std::size_t>(g2d.n_cells()), 1.0));
  CHECK(ergodic_average(ones2, SpatialKernel::make(KernelFamily::Gaussian, 0.3, 1.0, 2),
                        Probe::One, 4.0, 2) ==
        doctest::Approx(kPi).epsilon(1e-6));
  // u == 1 with the centered probe vanishes
  CHECK(ergodic_average(ones, k, Probe::VMinusOne, 4.0, g.n_steps) == 0.0);
  CHECK(probe_from_name("v-1") == Probe::VMinusOne);
  CHECK(probe_apply(Probe::TanhVMinusOne, 1.0) == 0.0);
  CHECK(probe_apply(Probe::SinV, 0.5) == doctest::Approx(std::sin(0.5)));
}

TEST_CASE("ergodic variance decays like R^{-d} (d=1)") {
  McSetup setup;
  setup.kernel = tri1();
  setup.sigma = SigmaSpec::affine(1.0, 0.0);
  setup.dimension = 1;
  setup.dx = 0.1;
  setup.dt = 0.1;
  setup.base_seed = 13;
  setup.threads = 1;
  const auto rep = ergodic_decay_scan(setup, Probe::VMinusOne, 1.0,
                                      {4.0, 8.0, 16.0, 32.0}, 1500);
  CHECK(rep.fit.slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("average sample CSV export") {
  std::vector<AverageSample> rows{{8.0, 1.0, 0, 42, 0.12},
                                  {8.0, 1.0, 1, 43, -0.2}};
  const auto path = std::filesystem::temp_directory_path() / "swl_avg.csv";
  write_average_samples_csv(rows, path.string());
  CHECK(std::filesystem::file_size(path) > 30);
  std::filesystem::remove(path);
}
