#ifndef SWL_SIGMA_HPP
#define SWL_SIGMA_HPP

#include <cmath>
#include <string>

#include "swl/common.hpp"

namespace swl {

enum class SigmaFamily { Affine, Sine, Identity };

const char* sigma_family_name(SigmaFamily f);

// Lipschitz diffusion coefficient sigma with known constant L.  The public
// factories enforce sigma(1) != 0; the *_unchecked variants exist only so
// tests can exercise the trivial u == 1 regime.
struct SigmaSpec {
  SigmaFamily family = SigmaFamily::Identity;
  double c0 = 0.0;  // affine: sigma(u) = c0 + c1 u
  double c1 = 0.0;
  double amp = 0.0;  // sine: sigma(u) = amp * sin(freq * u)
  double freq = 0.0;
  double lipschitz = 1.0;

  double operator()(double u) const {
    switch (family) {
      case SigmaFamily::Affine: return c0 + c1 * u;
      case SigmaFamily::Sine: return amp * std::sin(freq * u);
      case SigmaFamily::Identity: return u;
    }
    return 0.0;
  }

  double at_zero() const { return (*this)(0.0); }
  double at_one() const { return (*this)(1.0); }

  static SigmaSpec affine(double c0, double c1);
  static SigmaSpec sine(double amp, double freq);
  static SigmaSpec identity();
  // Test hook: bypasses the sigma(1) != 0 admissibility check.
  static SigmaSpec affine_unchecked_for_tests(double c0, double c1);
};

}  // namespace swl

#endif
