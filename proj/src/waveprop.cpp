#include "swl/waveprop.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace swl {

double green(const GreenSpec& spec, double t, const Vec& x) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "green requires t > 0");
  const double r = norm(x, spec.dimension);
  if (r >= t) return 0.0;
  if (spec.dimension == 1) return 0.5;
  return 1.0 / (2.0 * kPi * std::sqrt(t * t - r * r));
}

namespace {

// Entry/exit parameters of the ray origin + rho*dir against an axis slab.
bool slab_range(double origin, double dir, double lo, double hi, double& rmin,
                double& rmax) {
  constexpr double eps = 1e-14;
  if (std::abs(dir) < eps) {
    if (origin < lo || origin > hi) return false;
    return true;  // leaves [rmin, rmax] untouched
  }
  double r1 = (lo - origin) / dir;
  double r2 = (hi - origin) / dir;
  if (r1 > r2) std::swap(r1, r2);
  rmin = std::max(rmin, r1);
  rmax = std::min(rmax, r2);
  return rmax > rmin;
}

// Radial piece of the d=2 integral: int_{rho1}^{rho2} r/sqrt(t^2-r^2) dr with
// both limits clamped into [0, t].
double radial_piece(double t, double rho1, double rho2) {
  rho1 = std::clamp(rho1, 0.0, t);
  rho2 = std::clamp(rho2, 0.0, t);
  if (rho2 <= rho1) return 0.0;
  const double a = std::sqrt(std::max(0.0, t * t - rho1 * rho1));
  const double b = std::sqrt(std::max(0.0, t * t - rho2 * rho2));
  return a - b;
}

}  // namespace

double green_cell_integral(const GreenSpec& spec, double t, const Box& cell,
                           double rel_tol) {
  if (!(t > 0.0))
    throw Error(ErrorKind::InvalidArgument, "green_cell_integral requires t > 0");
  if (spec.dimension == 1) {
    if (!(cell.hi.x > cell.lo.x))
      throw Error(ErrorKind::InvalidArgument, "degenerate cell");
    const double lo = std::max(cell.lo.x, -t);
    const double hi = std::min(cell.hi.x, t);
    return 0.5 * std::max(0.0, hi - lo);
  }
  if (!(cell.hi.x > cell.lo.x) || !(cell.hi.y > cell.lo.y))
    throw Error(ErrorKind::InvalidArgument, "degenerate cell");

  // Quick reject: box entirely outside the light cone.
  const double cx = std::clamp(0.0, cell.lo.x, cell.hi.x);
  const double cy = std::clamp(0.0, cell.lo.y, cell.hi.y);
  if (std::hypot(cx, cy) >= t) return 0.0;

  const auto f = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    double rmin = 0.0, rmax = 1e300;
    if (!slab_range(0.0, c, cell.lo.x, cell.hi.x, rmin, rmax)) return 0.0;
    if (!slab_range(0.0, s, cell.lo.y, cell.hi.y, rmin, rmax)) return 0.0;
    if (rmax <= 0.0) return 0.0;
    return radial_piece(t, std::max(0.0, rmin), rmax);
  };

  // Split the angular integral at the corner angles, where the hit face, and
  // hence the integrand's form, changes.
  std::vector<double> cuts;
  const double xs[2] = {cell.lo.x, cell.hi.x};
  const double ys[2] = {cell.lo.y, cell.hi.y};
  for (double x : xs)
    for (double y : ys) {
      double a = std::atan2(y, x);
      if (a < 0.0) a += 2.0 * kPi;
      cuts.push_back(a);
    }
  cuts.push_back(0.0);
  cuts.push_back(2.0 * kPi);
  std::sort(cuts.begin(), cuts.end());

  QuadBudget budget;
  double total = 0.0;
  const double abs_tol = rel_tol * t;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-15) continue;
    total += adaptive_simpson(f, cuts[i], cuts[i + 1],
                              abs_tol * (cuts[i + 1] - cuts[i]) / (2.0 * kPi),
                              budget);
  }
  return total / (2.0 * kPi);
}

double phi(const GreenSpec& spec, double t, double R, double s, const Vec& y,
           double rel_tol) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "phi requires R > 0");
  if (!(s >= 0.0 && s < t))
    throw Error(ErrorKind::InvalidArgument, "phi requires 0 <= s < t");
  const double r = t - s;
  if (spec.dimension == 1) {
    const double lo = std::max(y.x - r, -R);
    const double hi = std::min(y.x + r, R);
    return 0.5 * std::max(0.0, hi - lo);
  }
  const double dy = std::hypot(y.x, y.y);
  if (dy + r <= R) return r;       // cone fully inside the ball
  if (dy >= R + r) return 0.0;     // cone fully outside

  const double c_coef = dy * dy - R * R;
  const auto f = [&](double theta) {
    const double ex = std::cos(theta), ey = std::sin(theta);
    const double b = y.x * ex + y.y * ey;
    const double disc = b * b - c_coef;
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    double rho1 = -b - sq, rho2 = -b + sq;
    if (rho2 <= 0.0) return 0.0;
    return radial_piece(r, std::max(0.0, rho1), rho2);
  };

  QuadBudget budget;
  const double abs_tol = rel_tol * r;
  double total;
  if (dy < R) {
    total = chunked_simpson(f, 0.0, 2.0 * kPi, 16, abs_tol, budget);
  } else {
    // Only the arc subtending the ball contributes.
    const double theta0 = std::atan2(-y.y, -y.x);
    const double alpha = std::asin(std::min(1.0, R / dy));
    total = chunked_simpson(f, theta0 - alpha, theta0 + alpha, 8, abs_tol,
                            budget);
  }
  return total / (2.0 * kPi);
}

double spectral_variance(const SpatialKernel& k, double t, double rel_tol) {
  if (!(t > 0.0))
    throw Error(ErrorKind::InvalidArgument, "spectral_variance requires t > 0");
  QuadBudget budget;
  const int d = k.dimension;
  const auto integrand = [&](double rho) {
    const double f = spectral_density_radial(k, rho);
    double osc;
    if (t * rho < 1e-7) {
      osc = t * t * (1.0 - (t * rho) * (t * rho) / 3.0);
    } else {
      const double sn = std::sin(t * rho);
      osc = sn * sn / (rho * rho);
    }
    return d == 1 ? osc * f / kPi : osc * f * rho / (2.0 * kPi);
  };
  // sin^2 <= 1 makes the tail beyond M at most mass_tail(M)/M^2.
  const double scale = spectral_total_mass(k) * t * t;
  double M = 1.0 / k.length_scale;
  for (int i = 0; i < 200; ++i) {
    if (spectral_mass_tail_bound(k, M) / (M * M) <= 0.1 * rel_tol * scale) break;
    M *= 2.0;
  }
  const int chunks =
      std::clamp(static_cast<int>(M * t / kPi) + 4, 8, 1 << 14);
  const double body =
      chunked_simpson(integrand, 0.0, M, chunks, rel_tol * scale, budget);
  return body + 0.5 * spectral_mass_tail_bound(k, M) / (M * M);
}

double green_smoothed(const SpatialKernel& k, double r, const Vec& z,
                      double rel_tol) {
  if (!(r > 0.0)) return 0.0;
  if (k.dimension == 1) {
    return 0.5 * (gamma_antiderivative_1d(k, z.x + r) -
                  gamma_antiderivative_1d(k, z.x - r));
  }
  // d=2: substitute rho = r sin(alpha); the rim singularity cancels exactly.
  QuadBudget budget;
  const double scale = r * gamma_radial(k, 0.0);
  const auto inner = [&](double theta) {
    const double ex = std::cos(theta), ey = std::sin(theta);
    const auto g = [&](double alpha) {
      const double rho = r * std::sin(alpha);
      const double wx = z.x - rho * ex;
      const double wy = z.y - rho * ey;
      return gamma_radial(k, std::hypot(wx, wy)) * r * std::sin(alpha);
    };
    return adaptive_simpson(g, 0.0, 0.5 * kPi, 0.05 * rel_tol * scale, budget);
  };
  const double total =
      chunked_simpson(inner, 0.0, 2.0 * kPi, 16, rel_tol * scale * 2.0 * kPi,
                      budget);
  return total / (2.0 * kPi);
}

}  // namespace swl
