#include "swl/quad.hpp"

#include <cmath>

namespace swl {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole,
                   double abs_tol, const QuadBudget& budget, int depth,
                   int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  budget.charge(2);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Roundoff floor: refining below machine noise of the partial sums is
  // useless and burns the budget.
  const double floor_tol = 1e-16 * (std::abs(left) + std::abs(right) + 1e-300);
  if (depth >= max_depth || std::abs(delta) <= 15.0 * std::max(abs_tol, floor_tol)) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, budget,
                     depth + 1, max_depth) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, budget,
                     depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, const QuadBudget& budget,
                        int max_depth) {
  if (!(b > a)) return 0.0;
  budget.charge(3);
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, budget, 0,
                     max_depth);
}

double chunked_simpson(const std::function<double(double)>& f, double a,
                       double b, int n_chunks, double abs_tol,
                       const QuadBudget& budget) {
  if (!(b > a)) return 0.0;
  if (n_chunks < 1) n_chunks = 1;
  const double h = (b - a) / n_chunks;
  const double tol_each = abs_tol / n_chunks;
  double sum = 0.0;
  for (int i = 0; i < n_chunks; ++i) {
    sum += adaptive_simpson(f, a + i * h, a + (i + 1) * h, tol_each, budget);
  }
  return sum;
}

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double x_tol, int max_iter) {
  const double inv_phi = 0.6180339887498948482;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace swl
