#ifndef SWL_QUAD_HPP
#define SWL_QUAD_HPP

#include <cstdint>
#include <functional>

#include "swl/common.hpp"

namespace swl {

struct QuadBudget {
  std::int64_t max_evals = 50'000'000;
  mutable std::int64_t used = 0;

  void charge(std::int64_t n) const {
    used += n;
    if (used > max_evals)
      throw Error(ErrorKind::QuadratureBudgetExceeded,
                  "quadrature evaluation budget exhausted");
  }
};

// Adaptive Simpson on [a,b].  Tolerance is absolute; callers convert from a
// relative target against a scale they know.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, const QuadBudget& budget,
                        int max_depth = 26);

// Convenience: splits [a,b] into n_chunks and integrates each adaptively.
// Useful for oscillatory integrands where one global Simpson estimate is
// unreliable.
double chunked_simpson(const std::function<double(double)>& f, double a,
                       double b, int n_chunks, double abs_tol,
                       const QuadBudget& budget);

// Golden-section minimization of a unimodal function on [a,b].
// Returns the argmin; tolerance is on the argument.
double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double x_tol, int max_iter = 200);

}  // namespace swl

#endif
