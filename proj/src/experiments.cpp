#include "swl/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "swl/averaging.hpp"
#include "swl/malliavin.hpp"
#include "swl/report.hpp"
#include "swl/stats.hpp"
#include "swl/threadpool.hpp"

namespace swl {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

SpatialKernel kernel_from_config(const Config& cfg) {
  const int d = cfg.get_int("dimension", 1);
  return SpatialKernel::make(
      kernel_family_from_name(cfg.get_string("kernel.family")),
      cfg.get_double("kernel.lambda", 1.0),
      cfg.get_double("kernel.amplitude", 1.0), d);
}

SigmaSpec sigma_from_config(const Config& cfg) {
  const std::string family = cfg.get_string("sigma.family", "identity");
  if (family == "affine")
    return SigmaSpec::affine(cfg.get_double("sigma.c0", 1.0),
                             cfg.get_double("sigma.c1", 0.0));
  if (family == "sine")
    return SigmaSpec::sine(cfg.get_double("sigma.amplitude", 1.0),
                           cfg.get_double("sigma.frequency", 1.0));
  if (family == "identity") return SigmaSpec::identity();
  throw Error(ErrorKind::InvalidArgument,
              "unknown sigma.family '" + family + "'");
}

int resolve_thread_count(const Config& cfg, const RunOverrides& ov) {
  if (ov.threads) return *ov.threads;
  if (cfg.has("threads")) return cfg.get_int("threads");
  if (const char* env = std::getenv("SWL_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad SWL_THREADS value");
    }
  }
  return 1;
}

McSetup setup_from_config(const Config& cfg, const RunOverrides& ov) {
  McSetup s;
  s.kernel = kernel_from_config(cfg);
  s.sigma = sigma_from_config(cfg);
  s.dimension = cfg.get_int("dimension", 1);
  s.dx = cfg.get_double("grid.dx", 0.05);
  s.dt = cfg.get_double("grid.dt", 0.025);
  s.base_seed = ov.seed ? *ov.seed : cfg.get_u64("base_seed", 1);
  s.threads = resolve_thread_count(cfg, ov);
  return s;
}

json fit_to_json(const RateFit& f) {
  return json{{"slope", f.slope},
              {"slope_se", f.std_error},
              {"r_squared", f.r_squared}};
}

json run_kernel_check(const Config& cfg, const McSetup& setup) {
  const double rel_tol = cfg.get_double("kernel_check.rel_tol", 1e-6);
  const DalangReport rep = check_dalang(setup.kernel, rel_tol);
  json j;
  j["experiment"] = "kernel-check";
  j["kernel"] = {{"family", kernel_family_name(setup.kernel.family)},
                 {"lambda", setup.kernel.length_scale},
                 {"amplitude", setup.kernel.amplitude},
                 {"dimension", setup.kernel.dimension}};
  j["dalang"] = {{"integral_value", rep.integral_value},
                 {"converged", rep.converged},
                 {"tail_bound", rep.tail_bound}};
  j["gamma_l1"] = gamma_l1_norm(setup.kernel);
  const double ell = cfg.get_double("kernel.ell", 2.0);
  j["ell"] = ell;
  j["gamma_lell"] = gamma_lp_norm(setup.kernel, ell);
  j["frak_m_t1"] = frak_m(setup.kernel, 1.0);
  return j;
}

json run_simulate(const Config& cfg, const McSetup& setup,
                  const RunOverrides& ov) {
  const double t = cfg.get_double("t", 1.0);
  const double R = cfg.get_double("r", 1.0);
  Grid grid = auto_grid(setup.dimension, setup.dx, setup.dt, R, t,
                        setup.kernel);
  if (cfg.has("grid.half_width") || cfg.has("grid.n")) {
    grid = Grid::make(setup.dimension, cfg.get_double("grid.half_width"),
                      cfg.get_int("grid.n"), setup.dt,
                      time_index(Grid{setup.dimension,
                                      cfg.get_double("grid.half_width"),
                                      cfg.get_int("grid.n"), setup.dt, 1},
                                 t));
  }
  const auto noise = sample_increments(setup.kernel, grid, setup.base_seed);
  const std::string scheme_str = cfg.get_string("scheme", "spectral");
  SolutionField field;
  if (scheme_str == "spectral")
    field = solve_spectral(setup.kernel, grid, setup.sigma, noise);
  else if (scheme_str == "mild-direct")
    field = solve_mild_direct(setup.kernel, grid, setup.sigma, noise);
  else if (scheme_str == "picard")
    field = solve_picard(setup.kernel, grid, setup.sigma, noise,
                         cfg.get_int("picard.n_iter", 8));
  else
    throw Error(ErrorKind::InvalidArgument, "unknown scheme " + scheme_str);

  const int t_idx = time_index(grid, t);
  write_solution_csv(field, t_idx,
                     (std::filesystem::path(ov.out_dir) / "snapshot.csv")
                         .string());
  if (cfg.get_int("dump_noise", 0))
    dump_noise(noise,
               (std::filesystem::path(ov.out_dir) / "noise.swnz").string());
  if (cfg.get_int("dump_solution", 0))
    dump_solution(field,
                  (std::filesystem::path(ov.out_dir) / "solution.swsl").string());

  const auto& slice = field.at_index(t_idx);
  double lo = slice[0], hi = slice[0], sum = 0.0;
  for (double v : slice) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  json j;
  j["experiment"] = "solve";
  j["scheme"] = scheme_str;
  j["t"] = t;
  j["grid"] = {{"n", grid.points_per_axis},
               {"half_width", grid.half_width},
               {"dx", grid.dx()},
               {"dt", grid.dt},
               {"n_steps", grid.n_steps},
               {"cfl_ok", grid.cfl_ok()}};
  j["field_min"] = lo;
  j["field_max"] = hi;
  j["field_mean"] = sum / static_cast<double>(slice.size());
  return j;
}

json run_clt(const Config& cfg, const McSetup& setup) {
  const double t = cfg.get_double("t", 1.0);
  const auto r_list = cfg.get_double_list("r_list");
  std::vector<int> replicas;
  if (cfg.has("replicas_list")) {
    for (double v : cfg.get_double_list("replicas_list"))
      replicas.push_back(static_cast<int>(v));
    if (replicas.size() != r_list.size())
      throw Error(ErrorKind::InvalidArgument,
                  "replicas_list must match r_list");
  } else {
    replicas.assign(r_list.size(), cfg.get_int("replicas", 2000));
  }
  const CltReport rep = clt_experiment(setup, t, r_list, replicas);

  json j;
  j["experiment"] = "clt";
  j["t"] = t;
  j["per_r"] = json::array();
  for (const auto& pr : rep.per_r)
    j["per_r"].push_back({{"r", pr.R},
                          {"n", pr.n_replicas},
                          {"sigma2", pr.sigma2},
                          {"sigma2_se", pr.sigma2_se},
                          {"ks", pr.ks},
                          {"tv_proxy", pr.tv},
                          {"var_density", pr.var_density}});
  j["slope"] = rep.ks_fit.slope;
  j["slope_se"] = rep.ks_fit.std_error;
  j["ks_fit"] = fit_to_json(rep.ks_fit);
  j["tv_fit"] = fit_to_json(rep.tv_fit);
  if (rep.limit_var_target)
    j["limit_var_target"] = *rep.limit_var_target;
  return j;
}

json run_fdd(const Config& cfg, const McSetup& setup) {
  const auto t_list = cfg.get_double_list("t_list");
  const double R = cfg.get_double("r");
  const int replicas = cfg.get_int("replicas", 2000);
  const FddReport rep = fdd_check(setup, t_list, R, replicas);
  json j;
  j["experiment"] = "fdd";
  j["t_list"] = t_list;
  j["r"] = R;
  j["n"] = rep.n_replicas;
  j["cov_emp"] = rep.cov_emp;
  j["cov_se"] = rep.cov_se;
  j["cov_target"] = rep.cov_target;
  j["max_abs_z"] = rep.max_abs_z;
  j["projection_ks"] = rep.projection_ks;
  return j;
}

json run_tightness(const Config& cfg, const McSetup& setup) {
  const double s = cfg.get_double("tightness.s", 0.25);
  const auto gaps = cfg.get_double_list("tightness.gaps");
  const double R = cfg.get_double("r");
  const int replicas = cfg.get_int("replicas", 2000);
  const TightnessReport rep = tightness_scan(setup, s, gaps, R, replicas);
  json j;
  j["experiment"] = "tightness";
  j["s"] = s;
  j["r"] = R;
  j["gaps"] = rep.gaps;
  j["l2_increment"] = rep.l2_increment;
  j["slope"] = rep.fit.slope;
  j["slope_se"] = rep.fit.std_error;
  j["fit"] = fit_to_json(rep.fit);
  return j;
}

json run_ergodic(const Config& cfg, const McSetup& setup) {
  const double t = cfg.get_double("t", 1.0);
  const auto r_list = cfg.get_double_list("r_list");
  const int replicas = cfg.get_int("replicas", 2000);
  const Probe g = probe_from_name(cfg.get_string("ergodic.probe", "v-1"));
  const ErgodicReport rep = ergodic_decay_scan(setup, g, t, r_list, replicas);
  json j;
  j["experiment"] = "ergodic";
  j["t"] = t;
  j["probe"] = probe_name(g);
  j["r_list"] = rep.r_list;
  j["variance"] = rep.variance;
  j["variance_se"] = rep.variance_se;
  j["slope"] = rep.fit.slope;
  j["slope_se"] = rep.fit.std_error;
  j["fit"] = fit_to_json(rep.fit);
  return j;
}

json run_malliavin(const Config& cfg, const McSetup& setup,
                   const RunOverrides& ov) {
  const double t = cfg.get_double("t", 0.5);
  const double x = cfg.get_double("malliavin.x", 0.0);
  const double epsilon = cfg.get_double("malliavin.epsilon", 1e-3);
  const double p = cfg.get_double("malliavin.p", 2.0);
  const int replicas = cfg.get_int("replicas", 200);
  if (setup.dimension != 1)
    throw Error(ErrorKind::DimensionUnsupported,
                "the malliavin experiment is wired for d = 1 probes");

  const auto y_points =
      cfg.get_double_list("malliavin.y_points", {0.0});
  std::vector<double> s_times =
      cfg.get_double_list("malliavin.s_times", {t / 2.0});

  double reach = std::abs(x);
  for (double y : y_points) reach = std::max(reach, std::abs(y));
  Grid grid = auto_grid(1, setup.dx, setup.dt, reach + 1e-9, t, setup.kernel);
  const int t_idx = time_index(grid, t);
  std::vector<int> s_indices;
  for (double s : s_times) s_indices.push_back(time_index(grid, s));

  const SandwichReport rep = sandwich_report(
      setup.kernel, grid, setup.sigma, s_indices, y_points, p, t_idx,
      Vec{x, 0.0}, setup.base_seed, replicas, epsilon, setup.threads);
  if (ov.formats.count("csv"))
    write_sandwich_csv(
        rep, (std::filesystem::path(ov.out_dir) / "sandwich.csv").string());

  json j;
  j["experiment"] = "malliavin";
  j["t"] = t;
  j["x"] = x;
  j["p"] = p;
  j["epsilon"] = epsilon;
  j["kappa"] = rep.kappa_value;
  j["formula_constant"] = rep.formula_constant;
  j["fitted_constant"] = rep.fitted_constant;
  j["ratio_spread"] = rep.ratio_spread;
  j["rows"] = json::array();
  int violations = 0;
  for (const auto& r : rep.rows) {
    j["rows"].push_back({{"s", r.s},
                         {"y", r.y},
                         {"estimate", r.estimate},
                         {"se", r.std_error},
                         {"lower", r.lower},
                         {"upper_fitted", r.upper},
                         {"violation_flag", r.violation}});
    if (r.violation) ++violations;
  }
  j["violations"] = violations;
  return j;
}

std::string csv_from_report(const json& j) {
  std::ostringstream csv;
  const std::string exp = j.value("experiment", "");
  if (exp == "clt") {
    csv << "r,n,sigma2,sigma2_se,ks,tv_proxy\n";
    for (const auto& row : j["per_r"])
      csv << row["r"].get<double>() << ',' << row["n"].get<int>() << ','
          << row["sigma2"].get<double>() << ',' << row["sigma2_se"].get<double>()
          << ',' << row["ks"].get<double>() << ','
          << row["tv_proxy"].get<double>() << '\n';
  } else if (exp == "tightness") {
    csv << "gap,l2_increment\n";
    for (std::size_t i = 0; i < j["gaps"].size(); ++i)
      csv << j["gaps"][i].get<double>() << ','
          << j["l2_increment"][i].get<double>() << '\n';
  } else if (exp == "ergodic") {
    csv << "r,variance,variance_se\n";
    for (std::size_t i = 0; i < j["r_list"].size(); ++i)
      csv << j["r_list"][i].get<double>() << ','
          << j["variance"][i].get<double>() << ','
          << j["variance_se"][i].get<double>() << '\n';
  } else if (exp == "fdd") {
    csv << "i,j,t_i,t_j,cov_emp,cov_se,cov_target\n";
    for (std::size_t a = 0; a < j["t_list"].size(); ++a)
      for (std::size_t b = 0; b < j["t_list"].size(); ++b)
        csv << a << ',' << b << ',' << j["t_list"][a].get<double>() << ','
            << j["t_list"][b].get<double>() << ','
            << j["cov_emp"][a][b].get<double>() << ','
            << j["cov_se"][a][b].get<double>() << ','
            << (j["cov_target"][a][b].is_null()
                    ? "nan"
                    : std::to_string(j["cov_target"][a][b].get<double>()))
            << '\n';
  }
  return csv.str();
}

std::string svg_from_report(const json& j) {
  const std::string exp = j.value("experiment", "");
  std::vector<SvgSeries> series;
  if (exp == "clt") {
    SvgSeries ks{"ks", "#1f6fb2", {}, {}, 0.0, 0.0, true};
    SvgSeries tv{"tv_proxy", "#b23a1f", {}, {}, 0.0, 0.0, true};
    for (const auto& row : j["per_r"]) {
      ks.x.push_back(row["r"].get<double>());
      ks.y.push_back(row["ks"].get<double>());
      tv.x.push_back(row["r"].get<double>());
      tv.y.push_back(row["tv_proxy"].get<double>());
    }
    const auto fit_series = [](SvgSeries& s, double slope) {
      s.fit_slope = slope;
      double sum = 0.0;
      for (std::size_t i = 0; i < s.x.size(); ++i)
        sum += std::log10(s.y[i]) - slope * std::log10(s.x[i]);
      s.fit_intercept = sum / static_cast<double>(s.x.size());
    };
    fit_series(ks, j["ks_fit"]["slope"].get<double>());
    fit_series(tv, j["tv_fit"]["slope"].get<double>());
    series = {ks, tv};
    return render_loglog_svg("normal-distance decay", "R", "distance", series);
  }
  if (exp == "tightness" || exp == "ergodic") {
    SvgSeries s{exp == "tightness" ? "|F_R(t)-F_R(s)|_2" : "variance",
                "#1f6fb2",
                {},
                {},
                j["slope"].get<double>(),
                0.0,
                true};
    const auto& xs = exp == "tightness" ? j["gaps"] : j["r_list"];
    const auto& ys = exp == "tightness" ? j["l2_increment"] : j["variance"];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s.x.push_back(xs[i].get<double>());
      s.y.push_back(ys[i].get<double>());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      sum += std::log10(s.y[i]) - s.fit_slope * std::log10(s.x[i]);
    s.fit_intercept = sum / static_cast<double>(s.x.size());
    series = {s};
    return render_loglog_svg(exp == "tightness" ? "increment scaling"
                                                : "ergodic variance decay",
                             exp == "tightness" ? "t - s" : "R",
                             exp == "tightness" ? "L2 increment" : "variance",
                             series);
  }
  return "";
}

}  // namespace

int run_experiment(const Config& config, const RunOverrides& overrides) {
  const auto start = std::chrono::steady_clock::now();
  const std::string exp = overrides.experiment
                              ? *overrides.experiment
                              : config.get_string("experiment");
  std::filesystem::create_directories(overrides.out_dir);
  const McSetup setup = setup_from_config(config, overrides);

  json j;
  if (exp == "kernel-check")
    j = run_kernel_check(config, setup);
  else if (exp == "solve" || exp == "simulate")
    j = run_simulate(config, setup, overrides);
  else if (exp == "clt")
    j = run_clt(config, setup);
  else if (exp == "fdd")
    j = run_fdd(config, setup);
  else if (exp == "tightness")
    j = run_tightness(config, setup);
  else if (exp == "ergodic")
    j = run_ergodic(config, setup);
  else if (exp == "malliavin")
    j = run_malliavin(config, setup, overrides);
  else
    throw Error(ErrorKind::InvalidArgument, "unknown experiment '" + exp + "'");

  j["base_seed"] = setup.base_seed;
  const std::filesystem::path out(overrides.out_dir);
  write_text_file((out / "report.json").string(), j.dump(2) + "\n");
  if (overrides.formats.count("csv")) {
    const std::string csv = csv_from_report(j);
    if (!csv.empty()) write_text_file((out / "report.csv").string(), csv);
  }
  if (overrides.formats.count("svg")) {
    const std::string svg = svg_from_report(j);
    if (!svg.empty()) write_text_file((out / "plot.svg").string(), svg);
  }

  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  json manifest;
  manifest["config_hash"] = config.hash();
  manifest["config"] = config.emit();
  manifest["seed"] = setup.base_seed;
  manifest["threads"] = setup.threads;
  manifest["experiment"] = exp;
  manifest["version"] = kVersion;
  manifest["wall_time_ms"] = wall_ms;
  write_text_file((out / "manifest.json").string(), manifest.dump(2) + "\n");

  if (exp == "kernel-check") std::cout << j.dump(2) << std::endl;
  return 0;
}

int rerender_report(const std::string& report_json_path,
                    const std::string& out_dir) {
  const json j = json::parse(read_text_file(report_json_path));
  std::filesystem::create_directories(out_dir);
  const std::string svg = svg_from_report(j);
  if (svg.empty())
    throw Error(ErrorKind::InvalidArgument,
                "report has no plottable content");
  write_text_file(
      (std::filesystem::path(out_dir) / "plot.svg").string(), svg);
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NonConvergent:
    case ErrorKind::QuadratureBudgetExceeded:
    case ErrorKind::EmbeddingNotPSD:
    case ErrorKind::DegenerateEpsilon:
    case ErrorKind::DegenerateVariance:
      return 3;
    default:
      return 2;
  }
}

}  // namespace swl
