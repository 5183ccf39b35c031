#include "swl/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "swl/common.hpp"

namespace swl {

namespace {

struct Frame {
  double x0, x1, y0, y1;        // data range (log10)
  double px0, px1, py0, py1;    // pixel box

  double px(double lx) const {
    return px0 + (lx - x0) / (x1 - x0) * (px1 - px0);
  }
  double py(double ly) const {
    return py1 - (ly - y0) / (y1 - y0) * (py1 - py0);
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

}  // namespace

std::string render_loglog_svg(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series) {
  double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      lx_min = std::min(lx_min, std::log10(s.x[i]));
      lx_max = std::max(lx_max, std::log10(s.x[i]));
      ly_min = std::min(ly_min, std::log10(s.y[i]));
      ly_max = std::max(ly_max, std::log10(s.y[i]));
    }
  if (lx_min > lx_max) {
    lx_min = 0.0;
    lx_max = 1.0;
  }
  if (ly_min > ly_max) {
    ly_min = 0.0;
    ly_max = 1.0;
  }
  const double pad_x = std::max(0.1, 0.08 * (lx_max - lx_min));
  const double pad_y = std::max(0.1, 0.08 * (ly_max - ly_min));
  Frame f{lx_min - pad_x, lx_max + pad_x, ly_min - pad_y, ly_max + pad_y,
          70.0, 610.0, 50.0, 420.0};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"480\" viewBox=\"0 0 640 480\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << f.px0 << "\" y=\"" << f.py0 << "\" width=\""
      << f.px1 - f.px0 << "\" height=\"" << f.py1 - f.py0
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  svg << "<text x=\"320\" y=\"465\" text-anchor=\"middle\" font-size=\"12\">"
      << x_label << " (log10)</text>\n";
  svg << "<text x=\"18\" y=\"235\" text-anchor=\"middle\" font-size=\"12\" "
         "transform=\"rotate(-90 18 235)\">"
      << y_label << " (log10)</text>\n";

  // Decade ticks.
  for (int e = static_cast<int>(std::floor(f.x0));
       e <= static_cast<int>(std::ceil(f.x1)); ++e) {
    if (e < f.x0 || e > f.x1) continue;
    const double x = f.px(e);
    svg << "<line x1=\"" << x << "\" y1=\"" << f.py1 << "\" x2=\"" << x
        << "\" y2=\"" << f.py1 + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << f.py1 + 18
        << "\" text-anchor=\"middle\" font-size=\"10\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::floor(f.y0));
       e <= static_cast<int>(std::ceil(f.y1)); ++e) {
    if (e < f.y0 || e > f.y1) continue;
    const double y = f.py(e);
    svg << "<line x1=\"" << f.px0 - 5 << "\" y1=\"" << y << "\" x2=\"" << f.px0
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << f.px0 - 8 << "\" y=\"" << y + 3
        << "\" text-anchor=\"end\" font-size=\"10\">1e" << e << "</text>\n";
  }

  int legend_row = 0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      svg << "<circle cx=\"" << f.px(std::log10(s.x[i])) << "\" cy=\""
          << f.py(std::log10(s.y[i])) << "\" r=\"4\" fill=\"" << s.color
          << "\"/>\n";
    }
    if (s.draw_fit) {
      const double yl = s.fit_intercept + s.fit_slope * f.x0;
      const double yr = s.fit_intercept + s.fit_slope * f.x1;
      svg << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << f.py(yl)
          << "\" x2=\"" << f.px(f.x1) << "\" y2=\"" << f.py(yr)
          << "\" stroke=\"" << s.color << "\" stroke-dasharray=\"5,4\"/>\n";
    }
    svg << "<circle cx=\"" << f.px1 - 150 << "\" cy=\""
        << f.py0 + 14 + 16 * legend_row << "\" r=\"4\" fill=\"" << s.color
        << "\"/>\n";
    svg << "<text x=\"" << f.px1 - 140 << "\" y=\""
        << f.py0 + 18 + 16 * legend_row << "\" font-size=\"11\">" << s.label
        << (s.draw_fit ? " (slope " + fmt(s.fit_slope) + ")" : "")
        << "</text>\n";
    ++legend_row;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  out << content;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace swl
