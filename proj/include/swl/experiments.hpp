#ifndef SWL_EXPERIMENTS_HPP
#define SWL_EXPERIMENTS_HPP

#include <optional>
#include <set>
#include <string>

#include "swl/config.hpp"

namespace swl {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_dir = ".";
  std::set<std::string> formats{"json", "csv"};
  std::optional<std::string> experiment;
};

// Executes the experiment named by the config (or override), writing
// report.json, report.csv, plot.svg and manifest.json under out_dir.
// Returns 0; failures surface as swl::Error (the CLI maps kinds to exit
// codes 2/3).
int run_experiment(const Config& config, const RunOverrides& overrides);

// Re-renders plot.svg from an existing report.json without recomputing.
int rerender_report(const std::string& report_json_path,
                    const std::string& out_dir);

// Exit-code mapping shared by the CLI and tests.
int exit_code_for(const Error& e);

}  // namespace swl

#endif
