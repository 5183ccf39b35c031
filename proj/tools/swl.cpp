#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swl/config.hpp"
#include "swl/experiments.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "json,csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool threads_set = false;
};

void attach_common(CLI::App* sub, CommonOpts& opts, bool config_required) {
  auto* cfg = sub->add_option("--config", opts.config_path, "config file");
  if (config_required) cfg->required();
  sub->add_option("--out", opts.out_dir, "output directory");
  sub->add_option("--format", opts.format,
                  "comma list of report formats: csv,json,svg");
  sub->add_option("--seed", opts.seed, "override base_seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  sub->add_option("--threads", opts.threads, "worker thread count")
      ->each([&](const std::string&) { opts.threads_set = true; });
}

swl::RunOverrides overrides_from(const CommonOpts& opts,
                                 const std::string& experiment) {
  swl::RunOverrides ov;
  ov.out_dir = opts.out_dir;
  ov.experiment = experiment;
  if (opts.seed_set) ov.seed = opts.seed;
  if (opts.threads_set) ov.threads = opts.threads;
  ov.formats.clear();
  ov.formats.insert("json");
  std::string item;
  std::istringstream ss(opts.format);
  while (std::getline(ss, item, ','))
    if (!item.empty()) ov.formats.insert(item);
  return ov;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic wave equation simulator and statistics runner"};
  app.require_subcommand(1);

  const std::vector<std::string> experiments = {
      "simulate", "clt", "fdd", "tightness", "ergodic", "malliavin",
      "kernel-check"};
  std::vector<CommonOpts> opts(experiments.size());
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    auto* sub = app.add_subcommand(experiments[i]);
    attach_common(sub, opts[i], true);
  }

  std::string report_path;
  CommonOpts report_opts;
  auto* report_cmd =
      app.add_subcommand("report", "re-render plots from a report JSON");
  report_cmd->add_option("report_json", report_path, "existing report.json")
      ->required();
  report_cmd->add_option("--out", report_opts.out_dir, "output directory");
  report_cmd->add_option("--format", report_opts.format, "svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (report_cmd->parsed())
      return swl::rerender_report(report_path, report_opts.out_dir);
    for (std::size_t i = 0; i < experiments.size(); ++i) {
      if (!app.get_subcommands().empty() &&
          app.get_subcommands()[0]->get_name() == experiments[i]) {
        const swl::Config cfg = swl::Config::load(opts[i].config_path);
        const std::string exp_name =
            experiments[i] == "simulate" ? "solve" : experiments[i];
        return swl::run_experiment(cfg, overrides_from(opts[i], exp_name));
      }
    }
    std::cerr << "error: no subcommand selected\n" << app.help() << std::endl;
    return 2;
  } catch (const swl::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return swl::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}
