#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swl/mcstat.hpp"
#include "swl/stats.hpp"

using namespace swl;

namespace {

SpatialKernel tri1() {
  return SpatialKernel::make(KernelFamily::Triangle1D, 1.0, 1.0, 1);
}

std::vector<double> normal_samples(int n, std::uint64_t key) {
  RandomStream stream(key);
  std::vector<double> out(n);
  for (int i = 0; i < n; i += 2) {
    const auto [a, b] = stream.normal_pair(static_cast<std::uint64_t>(i));
    out[i] = a;
    if (i + 1 < n) out[i + 1] = b;
  }
  return out;
}

}  // namespace

TEST_CASE("ks statistic anchors") {
  CHECK(ks_to_standard_normal({0.0}) == doctest::Approx(0.5));
  // stratified normal quantiles achieve the lattice floor 1/(2n)
  const int n = 1000;
  std::vector<double> strat(n);
  for (int i = 0; i < n; ++i) {
    // invert Phi by bisection
    const double target = (i + 0.5) / n;
    double lo = -8.0, hi = 8.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < target ? lo : hi) = mid;
    }
    strat[i] = 0.5 * (lo + hi);
  }
  CHECK(ks_to_standard_normal(strat) == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-6));
  // mass shifted far away
  auto shifted = normal_samples(500, 44);
  for (double& v : shifted) v += 10.0;
  CHECK(ks_to_standard_normal(shifted) >= 1.0 - 1e-3);
  // idempotent under doubling the sample set
  auto base = normal_samples(401, 9);
  auto doubled = base;
  doubled.insert(doubled.end(), base.begin(), base.end());
  CHECK(ks_to_standard_normal(base) ==
        doctest::Approx(ks_to_standard_normal(doubled)).epsilon(1e-12));
  CHECK_THROWS_AS(ks_to_standard_normal({}), Error);
}

TEST_CASE("tv proxy") {
  const auto good = normal_samples(10000, 17);
  CHECK(tv_proxy(good) <= 0.05);
  const std::vector<double> degenerate(500, 0.0);
  CHECK(tv_proxy(degenerate) >= 0.9);
  CHECK_THROWS_AS(tv_proxy(std::vector<double>(50, 0.0)), Error);
  // dominates KS up to estimator noise on near-normal alternatives
  for (std::uint64_t key : {21ull, 22ull, 23ull}) {
    auto pure = normal_samples(4000, key);
    CHECK(tv_proxy(pure) >= ks_to_standard_normal(pure) - 0.01);
    auto wide = pure;
    for (double& v : wide) v *= 1.3;
    CHECK(tv_proxy(wide) >= ks_to_standard_normal(wide) - 0.01);
    auto narrow = pure;
    for (double& v : narrow) v *= 0.75;
    CHECK(tv_proxy(narrow) >= ks_to_standard_normal(narrow) - 0.01);
    auto skewed = pure;
    for (double& v : skewed) v += 0.15 * (v * v - 1.0);
    CHECK(tv_proxy(skewed) >= ks_to_standard_normal(skewed) - 0.01);
  }
}

TEST_CASE("log-log fit recovers synthetic exponents") {
  std::vector<double> xs{4, 8, 16, 32, 64}, ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, -0.5));
  const auto fit = fit_log_log(xs, ys);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_log_log({1.0}, {1.0}), Error);
  CHECK_THROWS_AS(fit_log_log({1.0, 2.0}, {0.0, 1.0}), Error);
}

TEST_CASE("limit covariance target") {
  const auto k = tri1();
  const auto c1 = SigmaSpec::affine(1.0, 0.0);
  // omega_1 * c^2 * |gamma|_1 * int_0^1 (1-s)^2 ds = 2 * 1 * 1 * 1/3
  CHECK(limit_covariance_target(k, c1, 1.0, 1.0,
                                CovTargetMode::AdditiveClosedForm) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(limit_covariance_target(k, c1, 0.0, 1.0,
                                CovTargetMode::AdditiveClosedForm) == 0.0);
  CHECK(limit_covariance_target(k, c1, 0.7, 1.3,
                                CovTargetMode::AdditiveClosedForm) ==
        doctest::Approx(limit_covariance_target(
            k, c1, 1.3, 0.7, CovTargetMode::AdditiveClosedForm)));
  CHECK_THROWS_AS(limit_covariance_target(k, SigmaSpec::identity(), 1.0, 1.0,
                                          CovTargetMode::AdditiveClosedForm),
                  Error);
}

TEST_CASE("limit covariance monte carlo mode matches the closed form") {
  McSetup setup;
  setup.kernel = tri1();
  setup.sigma = SigmaSpec::affine(1.0, 0.0);
  setup.dimension = 1;
  setup.dx = 0.1;
  setup.dt = 0.1;
  setup.base_seed = 5;
  const double mc = limit_covariance_mc(setup, 1.0, 1.0, 3000);
  // The MC estimate converges to the R->infinity limit up to the scheme's
  // discretization; 10% absolute here.
  CHECK(mc == doctest::Approx(2.0 / 3.0).epsilon(0.1));
  CHECK_THROWS_AS(limit_covariance_mc(setup, 1.0, 1.0, 10), Error);
}

TEST_CASE("clt experiment, additive case stays at the gaussian noise floor") {
  McSetup setup;
  setup.kernel = tri1();
  setup.sigma = SigmaSpec::affine(1.0, 0.0);
  setup.dimension = 1;
  setup.dx = 0.1;
  setup.dt = 0.1;
  setup.base_seed = 20;
  const std::vector<double> r_list{4.0, 8.0};
  const std::vector<int> reps{1500, 1500};
  const auto rep = clt_experiment(setup, 1.0, r_list, reps);
  REQUIRE(rep.per_r.size() == 2);
  for (const auto& pr : rep.per_r) {
    // exact gaussianity at every R: KS is pure estimator noise
    CHECK(pr.ks <= 4.0 * 0.8686 / std::sqrt(static_cast<double>(pr.n_replicas)));
    // sigma_R^2 strictly positive beyond 4 SE
    CHECK(pr.sigma2 - 4.0 * pr.sigma2_se > 0.0);
  }
  CHECK(rep.limit_var_target.has_value());
  CHECK(*rep.limit_var_target == doctest::Approx(2.0 / 3.0));
  // variance density is near its target at modest R already
  CHECK(rep.per_r[1].var_density ==
        doctest::Approx(2.0 / 3.0).epsilon(0.15));
}

TEST_CASE("fdd check: duplicated times give a rank-1 covariance") {
  McSetup setup;
  setup.kernel = tri1();
  setup.sigma = SigmaSpec::affine(1.0, 0.0);
  setup.dimension = 1;
  setup.dx = 0.1;
  setup.dt = 0.0625;
  setup.base_seed = 30;
  const auto rep = fdd_check(setup, {1.0, 1.0}, 8.0, 800);
  const double det = rep.cov_emp[0][0] * rep.cov_emp[1][1] -
                     rep.cov_emp[0][1] * rep.cov_emp[1][0];
  CHECK(std::abs(det) <= 1e-12 * rep.cov_emp[0][0] * rep.cov_emp[1][1]);
  CHECK(rep.projection_ks.size() == 4);
}

TEST_CASE("fdd check: additive targets within 4 SE of the phi oracle") {
  McSetup setup;
  setup.kernel = tri1();
  setup.sigma = SigmaSpec::affine(1.0, 0.0);
  setup.dimension = 1;
  setup.dx = 0.05;
  setup.dt = 0.05;
  setup.base_seed = 31;
  const double R = 16.0;
  const std::vector<double> ts{0.5, 1.0};
  const auto rep = fdd_check(setup, ts, R, 2500);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double target =
          test::f_r_covariance_oracle_1d(setup.kernel, 1.0, R, ts[i], ts[j],
                                         setup.dt) /
          R;
      CHECK(std::abs(rep.cov_emp[i][j] - target) <= 4.0 * rep.cov_se[i][j]);
    }
}

TEST_CASE("tightness scan: increments vanish at zero gap and scale linearly") {
  McSetup setup;
  setup.kernel = tri1();
  setup.sigma = SigmaSpec::identity();
  setup.dimension = 1;
  setup.dx = 0.05;
  setup.dt = 0.05;
  setup.base_seed = 40;
  const auto rep = tightness_scan(setup, 0.25, {0.1, 0.2, 0.4}, 8.0, 1200);
  CHECK(rep.fit.slope == doctest::Approx(1.0).epsilon(0.2));
  // zero gap: identical time index, increment exactly zero
  Grid g = auto_grid(1, 0.05, 0.05, 8.0, 1.0, setup.kernel);
  const auto noise = sample_increments(setup.kernel, g, 1);
  const auto field = solve_spectral(setup.kernel, g, setup.sigma, noise);
  const auto w = make_ball_weights(g, 8.0);
  CHECK(f_r(field, setup.kernel, w, 10) - f_r(field, setup.kernel, w, 10) ==
        0.0);
  CHECK_THROWS_AS(tightness_scan(setup, 0.25, {0.1}, 8.0, 100), Error);
}

TEST_CASE("ergodic scan rejects the degenerate case") {
  McSetup setup;
  setup.kernel = tri1();
  setup.sigma = SigmaSpec::affine_unchecked_for_tests(0.0, 0.0);
  setup.dimension = 1;
  setup.dx = 0.1;
  setup.dt = 0.1;
  setup.base_seed = 50;
  CHECK_THROWS_AS(
      ergodic_decay_scan(setup, Probe::VMinusOne, 1.0, {4.0, 8.0}, 300),
      Error);
}

TEST_CASE("estimators are replica-order invariant") {
  auto s = normal_samples(1001, 3);
  auto reversed = s;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(ks_to_standard_normal(s) == ks_to_standard_normal(reversed));
  CHECK(tv_proxy(s) == tv_proxy(reversed));
  CHECK(mean(s) == doctest::Approx(mean(reversed)).epsilon(1e-15));
}
