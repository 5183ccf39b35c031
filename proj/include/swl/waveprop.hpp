#ifndef SWL_WAVEPROP_HPP
#define SWL_WAVEPROP_HPP

#include "swl/common.hpp"
#include "swl/kernels.hpp"
#include "swl/quad.hpp"

namespace swl {

struct GreenSpec {
  int dimension = 1;

  static GreenSpec make(int d) {
    if (d != 1 && d != 2)
      throw Error(ErrorKind::InvalidArgument, "dimension must be 1 or 2");
    return GreenSpec{d};
  }
};

// Axis-aligned box; lo.y/hi.y are ignored in d = 1.
struct Box {
  Vec lo;
  Vec hi;
};

// Wave fundamental solution G_t(x); zero on and outside the light cone.
//   d=1: 1/2 on {|x| < t};  d=2: (2 pi sqrt(t^2-|x|^2))^{-1} on {|x| < t}.
double green(const GreenSpec& spec, double t, const Vec& x);

// int_cell G_t(x) dx.  Exact interval intersection in d = 1; in d = 2 the
// radial integral is exact (int_0^a r/sqrt(t^2-r^2) dr = t - sqrt(t^2-a^2))
// and only the angle is integrated numerically.  The integrand is never
// sampled pointwise near the singular rim |x| = t.
double green_cell_integral(const GreenSpec& spec, double t, const Box& cell,
                           double rel_tol = 1e-8);

// varphi_{t,R}(s,y) = int_{B_R} G_{t-s}(x - y) dx, for 0 <= s < t.
double phi(const GreenSpec& spec, double t, double R, double s, const Vec& y,
           double rel_tol = 1e-7);

// int sin^2(t|xi|)/|xi|^2 mu(dxi), radial in d = 2.  Equals the double-space
// integral int int G_t(y) G_t(z) gamma(y - z) dy dz.
double spectral_variance(const SpatialKernel& k, double t,
                         double rel_tol = 1e-7);

// (G_r * gamma)(z): the gamma-smoothed wave kernel.  Closed form via the
// gamma antiderivative in d = 1; angular quadrature of the desingularized
// radial integral in d = 2.
double green_smoothed(const SpatialKernel& k, double r, const Vec& z,
                      double rel_tol = 1e-7);

}  // namespace swl

#endif
