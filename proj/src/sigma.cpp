#include "swl/sigma.hpp"

namespace swl {

const char* sigma_family_name(SigmaFamily f) {
  switch (f) {
    case SigmaFamily::Affine: return "affine";
    case SigmaFamily::Sine: return "sine";
    case SigmaFamily::Identity: return "identity";
  }
  return "?";
}

namespace {

void require_nontrivial(const SigmaSpec& s) {
  if (std::abs(s.at_one()) <= 1e-12)
    throw Error(ErrorKind::InvalidArgument,
                "sigma(1) = 0 violates condition (C3); the solution would be "
                "identically 1");
}

}  // namespace

SigmaSpec SigmaSpec::affine(double c0, double c1) {
  SigmaSpec s;
  s.family = SigmaFamily::Affine;
  s.c0 = c0;
  s.c1 = c1;
  s.lipschitz = std::abs(c1);
  require_nontrivial(s);
  return s;
}

SigmaSpec SigmaSpec::sine(double amp, double freq) {
  SigmaSpec s;
  s.family = SigmaFamily::Sine;
  s.amp = amp;
  s.freq = freq;
  s.lipschitz = std::abs(amp * freq);
  require_nontrivial(s);
  return s;
}

SigmaSpec SigmaSpec::identity() {
  SigmaSpec s;
  s.family = SigmaFamily::Identity;
  s.lipschitz = 1.0;
  return s;
}

SigmaSpec SigmaSpec::affine_unchecked_for_tests(double c0, double c1) {
  SigmaSpec s;
  s.family = SigmaFamily::Affine;
  s.c0 = c0;
  s.c1 = c1;
  s.lipschitz = std::abs(c1);
  return s;
}

}  // namespace swl
