#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "swl/mcstat.hpp"
#include "swl/solver.hpp"
#include "swl/waveprop.hpp"

using namespace swl;

namespace {

SpatialKernel tri1() {
  return SpatialKernel::make(KernelFamily::Triangle1D, 1.0, 1.0, 1);
}

NoiseIncrements zero_noise(const SpatialKernel& k, const Grid& g) {
  NoiseIncrements n{g, k, 0, {}};
  n.values.assign(g.n_steps,
                  std::vector<double>(static_cast<std::size_t>(g.n_cells()), 0.0));
  return n;
}

double max_dev_from_one(const SolutionField& f) {
  double dev = 0.0;
  for (const auto& slice : f.slices)
    for (double v : slice) dev = std::max(dev, std::abs(v - 1.0));
  return dev;
}

}  // namespace

TEST_CASE("sigma admissibility and Lipschitz contract") {
  CHECK_THROWS_AS(SigmaSpec::affine(0.0, 0.0), Error);
  CHECK_THROWS_AS(SigmaSpec::affine(1.0, -1.0), Error);   // sigma(1) = 0
  CHECK_THROWS_AS(SigmaSpec::sine(1.0, kPi), Error);      // sin(pi) = 0
  const auto hook = SigmaSpec::affine_unchecked_for_tests(0.0, 0.0);
  CHECK(hook(123.0) == 0.0);

  RandomStream stream(3);
  std::uint64_t ctr = 0;
  for (const auto& sig :
       {SigmaSpec::identity(), SigmaSpec::affine(0.3, -0.7),
        SigmaSpec::sine(1.5, 2.0)}) {
    for (int i = 0; i < 10000; ++i) {
      const auto [a, b] = stream.normal_pair(ctr++);
      CHECK(std::abs(sig(3.0 * a) - sig(3.0 * b)) <=
            sig.lipschitz * std::abs(3.0 * a - 3.0 * b) + 1e-12);
    }
  }
  CHECK(SigmaSpec::identity().at_one() == 1.0);
  CHECK(SigmaSpec::affine(2.0, 0.0).at_zero() == 2.0);
}

TEST_CASE("trivial regimes: zero sigma and zero noise") {
  const Grid g = Grid::make(1, 6.4, 128, 0.05, 16);
  const auto k = tri1();
  const auto noise = sample_increments(k, g, 1234);
  const auto sigma0 = SigmaSpec::affine_unchecked_for_tests(0.0, 0.0);

  CHECK(max_dev_from_one(solve_spectral(k, g, sigma0, noise)) == 0.0);
  CHECK(max_dev_from_one(solve_mild_direct(k, g, sigma0, noise)) == 0.0);
  CHECK(max_dev_from_one(solve_picard(k, g, sigma0, noise, 6)) == 0.0);

  const auto add = SigmaSpec::affine(1.0, 0.0);
  const auto zn = zero_noise(k, g);
  CHECK(max_dev_from_one(solve_spectral(k, g, add, zn)) == 0.0);
  CHECK(max_dev_from_one(solve_mild_direct(k, g, add, zn)) == 0.0);
}

TEST_CASE("initial slice is identically one; determinism") {
  const Grid g = Grid::make(1, 6.4, 128, 0.05, 8);
  const auto k = tri1();
  const auto sig = SigmaSpec::identity();
  const auto noise = sample_increments(k, g, 777);
  const auto a = solve_spectral(k, g, sig, noise);
  for (double v : a.at_index(0)) CHECK(v == 1.0);
  const auto b = solve_spectral(k, g, sig, noise);
  CHECK(a.slices == b.slices);
  const auto c = solve_mild_direct(k, g, sig, noise);
  const auto d = solve_mild_direct(k, g, sig, noise);
  CHECK(c.slices == d.slices);
  CHECK_THROWS_AS(
      solve_mild_direct(k, Grid::make(2, 6.4, 32, 0.05, 4), sig,
                        sample_increments(
                            SpatialKernel::make(KernelFamily::Gaussian, 1, 1, 2),
                            Grid::make(2, 6.4, 32, 0.05, 4), 1)),
      Error);
}

TEST_CASE("additive case: variance matches the spectral identity oracle") {
  const auto k = tri1();
  const Grid g = Grid::make(1, 6.4, 256, 0.05, 20);
  const auto emb = make_embedding(k, g);
  const auto sig = SigmaSpec::affine(1.0, 0.0);
  const int reps = 6000;
  SolveOptions opts;
  opts.store_indices = {20};
  std::vector<double> u0(reps);
  for (int r = 0; r < reps; ++r) {
    const auto noise = sample_increments(emb, derive_key(2024, r));
    u0[r] = solve_spectral(k, g, sig, noise, opts).at_index(20)[128] - 1.0;
  }
  const double var_mc = sample_variance(u0);
  double oracle = 0.0;
  for (int m = 0; m < 20; ++m)
    oracle += g.dt * spectral_variance(k, (20 - m) * g.dt);
  const double se = var_mc * std::sqrt(2.0 / reps);
  CHECK(std::abs(var_mc - oracle) <= 4.0 * se);

  // exact Gaussianity: skew and excess kurtosis at 4 SE
  CHECK(std::abs(skewness(u0)) <= 4.0 * skewness_se(u0.size()));
  CHECK(std::abs(excess_kurtosis(u0)) <= 4.0 * kurtosis_se(u0.size()));
}

TEST_CASE("mild-direct additive variance: discrete oracle and identity") {
  const auto k = tri1();
  const Grid g = Grid::make(1, 3.2, 64, 0.05, 20);
  const auto emb = make_embedding(k, g);
  const auto sig = SigmaSpec::affine(1.0, 0.0);
  const int reps = 3000;
  SolveOptions opts;
  opts.store_indices = {20};
  std::vector<double> u0(reps);
  for (int r = 0; r < reps; ++r) {
    const auto noise = sample_increments(emb, derive_key(515, r));
    u0[r] = solve_mild_direct(k, g, sig, noise, opts).at_index(20)[32] - 1.0;
  }
  const double var_mc = sample_variance(u0);

  // Exact second moment of the scheme: sum_m dt sum_{j,l} G G gamma dx^2 at
  // the scheme's own midpoint-in-time stamps (wrapped kernel).
  double oracle = 0.0;
  const GreenSpec spec{1};
  for (int m = 0; m < 20; ++m) {
    const double r = (20 - m) * g.dt - 0.5 * g.dt;
    double slice = 0.0;
    for (int j = 0; j < 64; ++j)
      for (int l = 0; l < 64; ++l) {
        const double gj = green(spec, r, {g.min_image((32 - j) * g.dx()), 0});
        const double gl = green(spec, r, {g.min_image((32 - l) * g.dx()), 0});
        if (gj == 0.0 || gl == 0.0) continue;
        slice += gj * gl * gamma_periodic(k, g, {g.min_image((j - l) * g.dx()), 0});
      }
    oracle += g.dt * slice * g.dx() * g.dx();
  }
  const double se = var_mc * std::sqrt(2.0 / reps);
  CHECK(std::abs(var_mc - oracle) <= 4.0 * se);

  // the same discrete oracle tracks the continuum spectral identity
  double continuum = 0.0;
  for (int m = 0; m < 20; ++m)
    continuum += g.dt * spectral_variance(k, (20 - m) * g.dt - 0.5 * g.dt);
  CHECK(oracle == doctest::Approx(continuum).epsilon(0.02));
}

TEST_CASE("scheme coupling: gap halves under refinement") {
  const auto k = tri1();
  const auto sig = SigmaSpec::affine(0.6, 0.4);
  const Grid coarse = Grid::make(1, 6.4, 128, 0.05, 10);
  const Grid fine = Grid::make(1, 6.4, 256, 0.025, 20);
  const auto embf = make_embedding(k, fine);
  double gap_c = 0.0, gap_f = 0.0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    const auto nf = sample_increments(embf, derive_key(808, r));
    const auto nc = test::coarsen_increments_1d(nf, coarse);
    const auto ac = solve_spectral(k, coarse, sig, nc);
    const auto bc = solve_mild_direct(k, coarse, sig, nc);
    const auto af = solve_spectral(k, fine, sig, nf);
    const auto bf = solve_mild_direct(k, fine, sig, nf);
    for (int j = 0; j < 128; ++j)
      gap_c = std::max(gap_c, std::abs(ac.at_index(10)[j] - bc.at_index(10)[j]));
    for (int j = 0; j < 256; ++j)
      gap_f = std::max(gap_f, std::abs(af.at_index(20)[j] - bf.at_index(20)[j]));
  }
  const double ratio = gap_c / gap_f;
  CHECK(ratio >= 1.4);
  CHECK(ratio <= 2.6);
}

TEST_CASE("picard iteration") {
  const auto k = tri1();
  const Grid g = Grid::make(1, 3.2, 64, 1.0 / 32.0, 32);
  const auto noise = sample_increments(k, g, 4321);
  const auto sig = SigmaSpec::affine(0.5, 0.5);

  CHECK(max_dev_from_one(solve_picard(k, g, sig, noise, 0)) == 0.0);

  const auto trivial = SigmaSpec::affine_unchecked_for_tests(1.0, -1.0);
  CHECK(trivial.at_one() == 0.0);
  CHECK(max_dev_from_one(solve_picard(k, g, trivial, noise, 8)) == 0.0);

  const auto direct = solve_mild_direct(k, g, sig, noise);
  const auto pic = solve_picard(k, g, sig, noise, 12);
  double gap = 0.0;
  for (int m = 0; m <= 32; ++m)
    for (int j = 0; j < 64; ++j)
      gap = std::max(gap,
                     std::abs(pic.at_index(m)[j] - direct.at_index(m)[j]));
  CHECK(gap <= 1e-6);
}

TEST_CASE("moment estimates") {
  const auto k = tri1();
  const Grid g = Grid::make(1, 4.0, 128, 0.0625, 16);
  const auto emb = make_embedding(k, g);
  const auto sig0 = SigmaSpec::affine_unchecked_for_tests(0.0, 0.0);
  SolveOptions opts;
  opts.store_indices = {16};
  std::vector<SolutionField> trivial(150);
  for (int r = 0; r < 150; ++r)
    trivial[r] = solve_spectral(k, g, sig0, sample_increments(emb, derive_key(1, r)), opts);
  const auto m0 = moment_estimate(trivial, 2.0, 16, 64);
  CHECK(m0.value == doctest::Approx(1.0));
  CHECK(m0.std_error == doctest::Approx(0.0));

  // additive: ||u(t,0)||_2^2 = 1 + Var
  const auto add = SigmaSpec::affine(1.0, 0.0);
  const int reps = 2500;
  std::vector<SolutionField> fields(reps);
  for (int r = 0; r < reps; ++r)
    fields[r] =
        solve_spectral(k, g, add, sample_increments(emb, derive_key(6, r)), opts);
  const auto m2 = moment_estimate(fields, 2.0, 16, 64);
  double var_oracle = 0.0;
  for (int m = 0; m < 16; ++m)
    var_oracle += g.dt * spectral_variance(k, (16 - m) * g.dt);
  CHECK(std::abs(m2.value * m2.value - (1.0 + var_oracle)) <=
        4.0 * 2.0 * m2.value * m2.std_error + 1e-6);

  // multiplicative: never exceeds the Picard moment bound
  const auto mult = SigmaSpec::identity();
  std::vector<SolutionField> fm(1000);
  for (int r = 0; r < 1000; ++r)
    fm[r] =
        solve_spectral(k, g, mult, sample_increments(emb, derive_key(9, r)), opts);
  const double t = 1.0;
  const double mt = frak_m(k, t);
  for (double p : {2.0, 4.0}) {
    const auto est = moment_estimate(fm, p, 16, 64);
    const double bound =
        std::sqrt(2.0 + 16.0 * p * mult.at_zero() * mult.at_zero() * t * mt) *
        std::exp(8.0 * p * mult.lipschitz * mult.lipschitz * t * mt);
    CHECK(est.value <= bound + 4.0 * est.std_error);
  }
  CHECK_THROWS_AS(moment_estimate(std::vector<SolutionField>(3), 2.0, 0, 0),
                  Error);
}

TEST_CASE("solution snapshots round-trip") {
  const auto k = tri1();
  const Grid g = Grid::make(1, 4.0, 64, 0.125, 8);
  const auto noise = sample_increments(k, g, 31337);
  const auto field = solve_spectral(k, g, SigmaSpec::identity(), noise);
  const auto dir = std::filesystem::temp_directory_path();
  write_solution_csv(field, 8, (dir / "swl_snap.csv").string());
  dump_solution(field, (dir / "swl_field.swsl").string());
  CHECK(std::filesystem::file_size(dir / "swl_snap.csv") > 100);
  CHECK(std::filesystem::file_size(dir / "swl_field.swsl") ==
        64 + 9 * 64 * sizeof(double));
  std::filesystem::remove(dir / "swl_snap.csv");
  std::filesystem::remove(dir / "swl_field.swsl");
}
