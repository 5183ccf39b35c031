#include "swl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "swl/mcstat.hpp"
#include "swl/threadpool.hpp"

namespace swl {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_to_standard_normal(std::vector<double> samples) {
  if (samples.empty())
    throw Error(ErrorKind::TooFewSamples, "KS statistic needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = normal_cdf(samples[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - cdf);
    d = std::max(d, cdf - static_cast<double>(i) / n);
  }
  return d;
}

double tv_proxy(const std::vector<double>& samples, double grid_step) {
  if (samples.size() < 200)
    throw Error(ErrorKind::TooFewSamples, "tv_proxy needs >= 200 samples");
  const std::size_t n = samples.size();
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double m = mean(samples);
  double sd = 0.0;
  {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
      sq[i] = (samples[i] - m) * (samples[i] - m);
    sd = std::sqrt(pairwise_sum(sq) / (n - 1));
  }
  const double iqr = sorted[static_cast<std::size_t>(0.75 * (n - 1))] -
                     sorted[static_cast<std::size_t>(0.25 * (n - 1))];
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, 1e-6);
  double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  if (h <= 0.0) h = 1e-6;

  const double lo = -6.0, hi = 6.0;
  const int m_grid = static_cast<int>(std::lround((hi - lo) / grid_step));
  const double inv_h = 1.0 / h;
  const double norm_c = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * kPi));
  double integral = 0.0;
  double prev = 0.0;
  for (int g = 0; g <= m_grid; ++g) {
    const double x = lo + g * grid_step;
    double kde = 0.0;
    // samples outside +-8h of x contribute < 1e-14 each
    const double cut = 8.0 * h;
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), x - cut);
    const auto last = std::upper_bound(sorted.begin(), sorted.end(), x + cut);
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) * inv_h;
      kde += std::exp(-0.5 * z * z);
    }
    kde *= norm_c;
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    const double diff = std::abs(kde - phi);
    if (g > 0) integral += 0.5 * (prev + diff) * grid_step;
    prev = diff;
  }
  return 0.5 * integral;
}

RateFit fit_log_log(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "fit needs >= 2 matched points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw Error(ErrorKind::InvalidArgument, "log-log fit needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = mean(lx), my = mean(ly);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.r_list = xs;
  // Naive residual-based slope error; experiment drivers override it with a
  // replica bootstrap.
  if (n > 2) {
    const double ss_res = syy - fit.slope * sxy;
    fit.std_error = std::sqrt(std::max(0.0, ss_res / (n - 2)) / sxx);
  }
  return fit;
}

double limit_covariance_target(const SpatialKernel& kernel,
                               const SigmaSpec& sigma, double t1, double t2,
                               CovTargetMode mode) {
  if (mode != CovTargetMode::AdditiveClosedForm)
    throw Error(ErrorKind::InvalidArgument,
                "Monte Carlo targets are computed by limit_covariance_mc");
  const bool constant_sigma =
      sigma.family == SigmaFamily::Affine && sigma.c1 == 0.0;
  if (!constant_sigma)
    throw Error(ErrorKind::ModeMismatch,
                "closed-form limit covariance is only valid for constant sigma");
  if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
  const double c = sigma.c0;
  const double m = std::min(t1, t2);
  const double time_integral =
      t1 * t2 * m - 0.5 * (t1 + t2) * m * m + m * m * m / 3.0;
  return unit_ball_volume(kernel.dimension) * c * c * gamma_l1_norm(kernel) *
         time_integral;
}

double limit_covariance_mc(const McSetup& setup, double t1, double t2,
                           int replicas) {
  if (replicas < 100)
    throw Error(ErrorKind::InsufficientReplicas,
                "limit_covariance_mc needs >= 100 replicas");
  if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
  const double t_max = std::max(t1, t2);
  // No observation ball here; the covariance integrand itself is windowed by
  // the light cones, so a small formal R suffices.
  Grid grid = auto_grid(setup.dimension, setup.dx, setup.dt, t_max, t_max,
                        setup.kernel);
  const CirculantEmbedding emb = make_embedding(setup.kernel, grid);
  const int i1 = time_index(grid, t1);
  const int i2 = time_index(grid, t2);
  SolveOptions opts;
  opts.store_indices = {i1, i2};
  const std::int64_t N = grid.n_cells();
  const int n = grid.points_per_axis;
  const std::int64_t origin = grid.dimension == 1
                                  ? n / 2
                                  : static_cast<std::int64_t>(n / 2) * n + n / 2;

  std::vector<std::vector<double>> u1(static_cast<std::size_t>(replicas));
  std::vector<double> u2(static_cast<std::size_t>(replicas));
  const std::uint64_t rk = derive_key(setup.base_seed, 0x55);
  parallel_for(replicas, setup.threads, [&](int r) {
    const auto noise =
        sample_increments(emb, derive_key(rk, static_cast<std::uint64_t>(r)));
    const auto field = solve_spectral(setup.kernel, grid, setup.sigma, noise, opts);
    u1[static_cast<std::size_t>(r)] = field.at_index(i1);
    u2[static_cast<std::size_t>(r)] = field.at_index(i2)[static_cast<std::size_t>(origin)];
  });

  const double m2 = mean(u2);
  std::vector<double> cov_cells(static_cast<std::size_t>(N), 0.0);
  std::vector<double> tmp(static_cast<std::size_t>(replicas));
  for (std::int64_t j = 0; j < N; ++j) {
    std::vector<double> col(static_cast<std::size_t>(replicas));
    for (std::size_t r = 0; r < col.size(); ++r)
      col[r] = u1[r][static_cast<std::size_t>(j)];
    const double m1 = mean(col);
    for (std::size_t r = 0; r < col.size(); ++r)
      tmp[r] = (col[r] - m1) * (u2[r] - m2);
    cov_cells[static_cast<std::size_t>(j)] =
        pairwise_sum(tmp) / (tmp.size() - 1) * grid.cell_volume();
  }
  return unit_ball_volume(setup.dimension) * pairwise_sum(cov_cells);
}

namespace {

std::uint64_t sub_key(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive_key(derive_key(base, a), b);
}

struct RadiusRun {
  Grid grid;
  BallWeights weights;
  int t_index = 0;
  std::vector<double> f_samples;
};

// Simulates `n_rep` replicas at radius R and collects F_R at the listed time
// indices (one row per time).
std::vector<std::vector<double>> run_radius(const McSetup& setup, double R,
                                            const std::vector<double>& times,
                                            int n_rep, std::uint64_t radius_key,
                                            Grid& grid_out,
                                            double extra_time = 0.0) {
  const double t_max =
      *std::max_element(times.begin(), times.end()) + extra_time;
  Grid grid = auto_grid(setup.dimension, setup.dx, setup.dt, R, t_max,
                        setup.kernel);
  const CirculantEmbedding emb = make_embedding(setup.kernel, grid);
  const BallWeights weights = make_ball_weights(grid, R);
  std::vector<int> idx;
  idx.reserve(times.size());
  for (double t : times) idx.push_back(time_index(grid, t));
  SolveOptions opts;
  opts.store_indices = idx;

  std::vector<std::vector<double>> out(times.size(),
                                       std::vector<double>(n_rep, 0.0));
  parallel_for(n_rep, setup.threads, [&](int r) {
    const auto noise =
        sample_increments(emb, derive_key(radius_key, static_cast<std::uint64_t>(r)));
    const auto field = solve_spectral(setup.kernel, grid, setup.sigma, noise, opts);
    for (std::size_t i = 0; i < idx.size(); ++i)
      out[i][static_cast<std::size_t>(r)] =
          f_r(field, setup.kernel, weights, idx[i]);
  });
  grid_out = grid;
  return out;
}

double ks_of_standardized(const std::vector<double>& f_samples) {
  const double s2 = sample_variance(f_samples);
  std::vector<double> z(f_samples.size());
  const double inv = 1.0 / std::sqrt(s2);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = f_samples[i] * inv;
  return ks_to_standard_normal(z);
}

double tv_of_standardized(const std::vector<double>& f_samples,
                          double grid_step) {
  const double s2 = sample_variance(f_samples);
  std::vector<double> z(f_samples.size());
  const double inv = 1.0 / std::sqrt(s2);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = f_samples[i] * inv;
  return tv_proxy(z, grid_step);
}

// Bootstrap the slope of log(metric(samples_R)) vs log(R).
double bootstrap_slope_se(
    const std::vector<double>& r_list,
    const std::vector<std::vector<double>>& samples_per_r,
    const std::function<double(const std::vector<double>&)>& metric,
    int n_resamples, std::uint64_t key) {
  RandomStream stream(derive_key(key, stream_tag::kBootstrap));
  std::uint64_t ctr = 0;
  std::vector<double> slopes;
  slopes.reserve(static_cast<std::size_t>(n_resamples));
  for (int b = 0; b < n_resamples; ++b) {
    std::vector<double> ys(r_list.size());
    bool ok = true;
    for (std::size_t i = 0; i < r_list.size(); ++i) {
      const auto& src = samples_per_r[i];
      std::vector<double> re(src.size());
      for (std::size_t j = 0; j < src.size(); ++j)
        re[j] = src[stream.uniform_index(ctr++, src.size())];
      const double v = metric(re);
      if (!(v > 0.0)) {
        ok = false;
        break;
      }
      ys[i] = v;
    }
    if (!ok) continue;
    slopes.push_back(fit_log_log(r_list, ys).slope);
  }
  if (slopes.size() < 2) return 0.0;
  const double m = mean(slopes);
  std::vector<double> sq(slopes.size());
  for (std::size_t i = 0; i < slopes.size(); ++i)
    sq[i] = (slopes[i] - m) * (slopes[i] - m);
  return std::sqrt(pairwise_sum(sq) / (slopes.size() - 1));
}

}  // namespace

CltReport clt_experiment(const McSetup& setup, double t,
                         const std::vector<double>& r_list,
                         const std::vector<int>& replicas) {
  if (r_list.size() < 2 || r_list.size() != replicas.size())
    throw Error(ErrorKind::InvalidArgument,
                "clt_experiment needs matched r_list/replicas, >= 2 radii");
  CltReport report;
  report.t = t;
  std::vector<std::vector<double>> samples_per_r(r_list.size());
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    if (replicas[i] < 200)
      throw Error(ErrorKind::InsufficientReplicas,
                  "clt_experiment needs >= 200 replicas per radius");
    Grid grid;
    auto rows = run_radius(setup, r_list[i], {t}, replicas[i],
                           sub_key(setup.base_seed, 0x10, i), grid);
    samples_per_r[i] = std::move(rows[0]);

    CltPerRadius pr;
    pr.R = r_list[i];
    pr.n_replicas = replicas[i];
    pr.sigma2 = sample_variance(samples_per_r[i]);
    pr.sigma2_se = bootstrap_se(
        samples_per_r[i],
        [](const std::vector<double>& v) { return sample_variance(v); }, 200,
        sub_key(setup.base_seed, 0x11, i));
    pr.ks = ks_of_standardized(samples_per_r[i]);
    pr.tv = tv_of_standardized(samples_per_r[i], 0.005);
    const double rd = setup.dimension == 1 ? pr.R : pr.R * pr.R;
    pr.var_density = pr.sigma2 / rd;
    report.per_r.push_back(pr);
  }

  std::vector<double> ks_vals, tv_vals;
  for (const auto& pr : report.per_r) {
    ks_vals.push_back(pr.ks);
    tv_vals.push_back(pr.tv);
  }
  report.ks_fit = fit_log_log(r_list, ks_vals);
  report.ks_fit.std_error = bootstrap_slope_se(
      r_list, samples_per_r,
      [](const std::vector<double>& v) { return ks_of_standardized(v); }, 200,
      sub_key(setup.base_seed, 0x12, 0));
  report.tv_fit = fit_log_log(r_list, tv_vals);
  report.tv_fit.std_error = bootstrap_slope_se(
      r_list, samples_per_r,
      [](const std::vector<double>& v) { return tv_of_standardized(v, 0.02); },
      60, sub_key(setup.base_seed, 0x12, 1));

  if (setup.sigma.family == SigmaFamily::Affine && setup.sigma.c1 == 0.0)
    report.limit_var_target = limit_covariance_target(
        setup.kernel, setup.sigma, t, t, CovTargetMode::AdditiveClosedForm);
  return report;
}

FddReport fdd_check(const McSetup& setup, const std::vector<double>& t_list,
                    double R, int replicas) {
  if (t_list.size() < 2 || t_list.size() > 5)
    throw Error(ErrorKind::InvalidArgument, "fdd needs 2..5 time points");
  FddReport rep;
  rep.t_list = t_list;
  rep.R = R;
  rep.n_replicas = replicas;
  Grid grid;
  auto rows = run_radius(setup, R, t_list, replicas,
                         sub_key(setup.base_seed, 0x20, 0), grid);
  const double scale =
      setup.dimension == 1 ? std::sqrt(R) : R;  // R^{d/2}
  for (auto& row : rows)
    for (double& v : row) v /= scale;
  rep.samples = rows;

  const std::size_t k = t_list.size();
  const auto cov_of = [&](const std::vector<std::vector<double>>& data,
                          std::size_t i, std::size_t j) {
    const double mi = mean(data[i]);
    const double mj = mean(data[j]);
    std::vector<double> prod(data[i].size());
    for (std::size_t r = 0; r < prod.size(); ++r)
      prod[r] = (data[i][r] - mi) * (data[j][r] - mj);
    return pairwise_sum(prod) / (prod.size() - 1);
  };

  rep.cov_emp.assign(k, std::vector<double>(k, 0.0));
  rep.cov_se.assign(k, std::vector<double>(k, 0.0));
  rep.cov_target.assign(k, std::vector<double>(k,
                        std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) rep.cov_emp[i][j] = cov_of(rows, i, j);

  // Joint bootstrap over replica indices.
  {
    RandomStream stream(
        derive_key(sub_key(setup.base_seed, 0x21, 0), stream_tag::kBootstrap));
    std::uint64_t ctr = 0;
    const int B = 200;
    std::vector<std::vector<std::vector<double>>> boots(
        k, std::vector<std::vector<double>>(k));
    std::vector<std::vector<double>> re(k,
                                        std::vector<double>(rows[0].size()));
    for (int b = 0; b < B; ++b) {
      for (std::size_t r = 0; r < rows[0].size(); ++r) {
        const std::size_t pick = stream.uniform_index(ctr++, rows[0].size());
        for (std::size_t i = 0; i < k; ++i) re[i][r] = rows[i][pick];
      }
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          boots[i][j].push_back(cov_of(re, i, j));
    }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const double m = mean(boots[i][j]);
        std::vector<double> sq(boots[i][j].size());
        for (std::size_t b = 0; b < sq.size(); ++b)
          sq[b] = (boots[i][j][b] - m) * (boots[i][j][b] - m);
        rep.cov_se[i][j] = std::sqrt(pairwise_sum(sq) / (sq.size() - 1));
      }
  }

  const bool additive =
      setup.sigma.family == SigmaFamily::Affine && setup.sigma.c1 == 0.0;
  double max_z = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (additive) {
        rep.cov_target[i][j] =
            limit_covariance_target(setup.kernel, setup.sigma, t_list[i],
                                    t_list[j], CovTargetMode::AdditiveClosedForm);
        if (rep.cov_se[i][j] > 0.0)
          max_z = std::max(max_z, std::abs(rep.cov_emp[i][j] -
                                           rep.cov_target[i][j]) /
                                      rep.cov_se[i][j]);
      }
    }
  rep.max_abs_z = max_z;

  // Normality screen: KS of 4 random one-dimensional projections.
  RandomStream proj(derive_key(sub_key(setup.base_seed, 0x22, 0),
                               stream_tag::kProjection));
  std::uint64_t ctr = 0;
  for (int pidx = 0; pidx < 4; ++pidx) {
    std::vector<double> w(k);
    double norm_w = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      w[i] = proj.normal_pair(ctr++).first;
      norm_w += w[i] * w[i];
    }
    for (double& wi : w) wi /= std::sqrt(norm_w);
    double var_proj = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        var_proj += w[i] * w[j] * rep.cov_emp[i][j];
    if (var_proj <= 0.0) {
      rep.projection_ks.push_back(1.0);
      continue;
    }
    std::vector<double> y(rows[0].size());
    for (std::size_t r = 0; r < y.size(); ++r) {
      double acc = 0.0;
      for (std::size_t i = 0; i < k; ++i) acc += w[i] * rows[i][r];
      y[r] = acc / std::sqrt(var_proj);
    }
    rep.projection_ks.push_back(ks_to_standard_normal(y));
  }
  return rep;
}

TightnessReport tightness_scan(const McSetup& setup, double s,
                               const std::vector<double>& gaps, double R,
                               int replicas) {
  if (gaps.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "tightness scan needs >= 2 gaps");
  for (double g : gaps)
    if (!(g > 0.0))
      throw Error(ErrorKind::InvalidArgument, "gaps must be positive");
  TightnessReport rep;
  rep.s = s;
  rep.R = R;
  rep.gaps = gaps;

  std::vector<double> times{s};
  for (double g : gaps) times.push_back(s + g);
  Grid grid;
  auto rows = run_radius(setup, R, times, replicas,
                         sub_key(setup.base_seed, 0x30, 0), grid);

  std::vector<std::vector<double>> inc_sq(gaps.size());
  for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
    inc_sq[gi].resize(rows[0].size());
    for (std::size_t r = 0; r < rows[0].size(); ++r) {
      const double d = rows[gi + 1][r] - rows[0][r];
      inc_sq[gi][r] = d * d;
    }
    rep.l2_increment.push_back(std::sqrt(mean(inc_sq[gi])));
  }
  rep.fit = fit_log_log(gaps, rep.l2_increment);
  rep.fit.std_error = bootstrap_slope_se(
      gaps, inc_sq,
      [](const std::vector<double>& v) { return std::sqrt(mean(v)); }, 200,
      sub_key(setup.base_seed, 0x31, 0));
  return rep;
}

ErgodicReport ergodic_decay_scan(const McSetup& setup, Probe g, double t,
                                 const std::vector<double>& r_list,
                                 int replicas) {
  if (r_list.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "ergodic scan needs >= 2 radii");
  ErgodicReport rep;
  rep.probe = g;
  rep.t = t;
  rep.r_list = r_list;

  std::vector<std::vector<double>> avg_per_r(r_list.size());
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    const double R = r_list[i];
    Grid grid = auto_grid(setup.dimension, setup.dx, setup.dt, R, t,
                          setup.kernel);
    const CirculantEmbedding emb = make_embedding(setup.kernel, grid);
    const BallWeights weights = make_ball_weights(grid, R);
    const int t_idx = time_index(grid, t);
    SolveOptions opts;
    opts.store_indices = {t_idx};
    const std::uint64_t rk = sub_key(setup.base_seed, 0x40, i);
    auto& samples = avg_per_r[i];
    samples.resize(static_cast<std::size_t>(replicas));
    parallel_for(replicas, setup.threads, [&](int r) {
      const auto noise =
          sample_increments(emb, derive_key(rk, static_cast<std::uint64_t>(r)));
      const auto field =
          solve_spectral(setup.kernel, grid, setup.sigma, noise, opts);
      samples[static_cast<std::size_t>(r)] =
          ergodic_average(field, setup.kernel, g, weights, t_idx);
    });
    const double var = sample_variance(samples);
    if (!(var > 1e-28))
      throw Error(ErrorKind::DegenerateVariance,
                  "spatial-average variance is numerically zero");
    rep.variance.push_back(var);
    rep.variance_se.push_back(bootstrap_se(
        samples, [](const std::vector<double>& v) { return sample_variance(v); },
        200, sub_key(setup.base_seed, 0x41, i)));
  }
  rep.fit = fit_log_log(r_list, rep.variance);
  rep.fit.std_error = bootstrap_slope_se(
      r_list, avg_per_r,
      [](const std::vector<double>& v) { return sample_variance(v); }, 200,
      sub_key(setup.base_seed, 0x42, 0));
  return rep;
}

}  // namespace swl
