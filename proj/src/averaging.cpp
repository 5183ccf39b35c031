#include "swl/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "swl/mcstat.hpp"

namespace swl {

namespace {

// Antiderivative of sqrt(R^2 - x^2) on [-R, R].
double circle_antideriv(double R, double x) {
  x = std::clamp(x, -R, R);
  return 0.5 * (x * std::sqrt(std::max(0.0, R * R - x * x)) +
                R * R * std::asin(x / R));
}

}  // namespace

double disc_rect_overlap(double R, double x1, double x2, double y1, double y2) {
  if (!(R > 0.0) || x2 <= x1 || y2 <= y1) return 0.0;
  x1 = std::max(x1, -R);
  x2 = std::min(x2, R);
  if (x2 <= x1) return 0.0;

  // Breakpoints where min(y2, g) or max(y1, -g) changes branch, g = sqrt(R^2-x^2).
  std::vector<double> cuts{x1, x2};
  for (double y : {y1, y2}) {
    if (std::abs(y) < R) {
      const double xc = std::sqrt(R * R - y * y);
      for (double c : {-xc, xc})
        if (c > x1 && c < x2) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a < 1e-15) continue;
    const double xm = 0.5 * (a + b);
    const double g = std::sqrt(std::max(0.0, R * R - xm * xm));
    const double top = std::min(y2, g);
    const double bot = std::max(y1, -g);
    if (top <= bot) continue;
    double piece = 0.0;
    piece += (y2 <= g) ? y2 * (b - a)
                       : circle_antideriv(R, b) - circle_antideriv(R, a);
    piece -= (y1 >= -g) ? y1 * (b - a)
                        : -(circle_antideriv(R, b) - circle_antideriv(R, a));
    area += piece;
  }
  return area;
}

BallWeights make_ball_weights(const Grid& grid, double R) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "R must be positive");
  BallWeights bw;
  bw.R = R;
  const std::int64_t N = grid.n_cells();
  bw.w.assign(static_cast<std::size_t>(N), 0.0);
  const double dx = grid.dx();
  const double h = 0.5 * dx;
  if (grid.dimension == 1) {
    for (std::int64_t j = 0; j < N; ++j) {
      const double c = grid.point(j).x;
      const double lo = std::max(c - h, -R);
      const double hi = std::min(c + h, R);
      bw.w[j] = std::max(0.0, hi - lo) / dx;
    }
  } else {
    for (std::int64_t j = 0; j < N; ++j) {
      const Vec p = grid.point(j);
      // Quick classification by center distance versus cell circumradius.
      const double dist = std::hypot(p.x, p.y);
      const double rad = h * std::sqrt(2.0);
      if (dist + rad <= R) {
        bw.w[j] = 1.0;
      } else if (dist - rad >= R) {
        bw.w[j] = 0.0;
      } else {
        bw.w[j] = disc_rect_overlap(R, p.x - h, p.x + h, p.y - h, p.y + h) /
                  (dx * dx);
      }
    }
  }
  std::vector<double> scaled(bw.w);
  const double vol = grid.cell_volume();
  for (double& v : scaled) v *= vol;
  bw.weighted_volume = pairwise_sum(scaled);
  return bw;
}

namespace {

void check_ball(const SolutionField& solution, const SpatialKernel& kernel,
                double R) {
  const Grid& g = solution.grid;
  const double need = R + g.horizon() + effective_range(kernel);
  if (g.half_width + 1e-9 < need)
    throw Error(ErrorKind::BallExceedsDomain,
                "ball radius " + std::to_string(R) +
                    " plus light cone exceeds the domain");
}

}  // namespace

double f_r(const SolutionField& solution, const SpatialKernel& kernel,
           const BallWeights& weights, int t_index) {
  check_ball(solution, kernel, weights.R);
  const auto& u = solution.at_index(t_index);
  const double vol = solution.grid.cell_volume();
  std::vector<double> terms(u.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    terms[j] = weights.w[j] * (u[j] - 1.0) * vol;
  return pairwise_sum(terms);
}

double f_r(const SolutionField& solution, const SpatialKernel& kernel,
           double R, int t_index) {
  return f_r(solution, kernel, make_ball_weights(solution.grid, R), t_index);
}

const char* probe_name(Probe p) {
  switch (p) {
    case Probe::One: return "one";
    case Probe::VMinusOne: return "v-1";
    case Probe::TanhVMinusOne: return "tanh(v-1)";
    case Probe::SinV: return "sin(v)";
  }
  return "?";
}

Probe probe_from_name(const std::string& name) {
  if (name == "one") return Probe::One;
  if (name == "v-1") return Probe::VMinusOne;
  if (name == "tanh(v-1)" || name == "tanh") return Probe::TanhVMinusOne;
  if (name == "sin(v)" || name == "sin") return Probe::SinV;
  throw Error(ErrorKind::InvalidArgument, "unknown probe '" + name + "'");
}

double probe_apply(Probe p, double v) {
  switch (p) {
    case Probe::One: return 1.0;
    case Probe::VMinusOne: return v - 1.0;
    case Probe::TanhVMinusOne: return std::tanh(v - 1.0);
    case Probe::SinV: return std::sin(v);
  }
  return 0.0;
}

double ergodic_average(const SolutionField& solution,
                       const SpatialKernel& kernel, Probe g,
                       const BallWeights& weights, int t_index) {
  check_ball(solution, kernel, weights.R);
  const auto& u = solution.at_index(t_index);
  const double vol = solution.grid.cell_volume();
  std::vector<double> terms(u.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    terms[j] = weights.w[j] * probe_apply(g, u[j]) * vol;
  const double rd = solution.grid.dimension == 1 ? weights.R
                                                 : weights.R * weights.R;
  return pairwise_sum(terms) / rd;
}

double ergodic_average(const SolutionField& solution,
                       const SpatialKernel& kernel, Probe g, double R,
                       int t_index) {
  return ergodic_average(solution, kernel, g,
                         make_ball_weights(solution.grid, R), t_index);
}

void write_average_samples_csv(const std::vector<AverageSample>& samples,
                               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  out << "R,t,replica,seed,value\n";
  for (const auto& s : samples)
    out << s.R << ',' << s.t << ',' << s.replica << ',' << s.seed << ','
        << s.value << '\n';
}

}  // namespace swl
