#ifndef SWL_REPORT_HPP
#define SWL_REPORT_HPP

#include <string>
#include <vector>

namespace swl {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;  // in log10 space
  bool draw_fit = false;
};

// Native log-log scatter plot with optional fitted lines; no plotting
// dependency.
std::string render_loglog_svg(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace swl

#endif
