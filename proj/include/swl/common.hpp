#ifndef SWL_COMMON_HPP
#define SWL_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace swl {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Volume of the unit ball: 2 in d=1, pi in d=2.
inline double unit_ball_volume(int d) { return d == 1 ? 2.0 : kPi; }

enum class ErrorKind {
  NonConvergent,
  QuadratureBudgetExceeded,
  EmbeddingNotPSD,
  IndexOutOfRange,
  DimensionUnsupported,
  InsufficientReplicas,
  TooFewSamples,
  ModeMismatch,
  BallExceedsDomain,
  DegenerateEpsilon,
  DegenerateVariance,
  InvalidArgument,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::QuadratureBudgetExceeded: return "QuadratureBudgetExceeded";
    case ErrorKind::EmbeddingNotPSD: return "EmbeddingNotPSD";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::InsufficientReplicas: return "InsufficientReplicas";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::BallExceedsDomain: return "BallExceedsDomain";
    case ErrorKind::DegenerateEpsilon: return "DegenerateEpsilon";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Point in R^d, d in {1,2}; y is ignored when d == 1.
struct Vec {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(const Vec& v, int d) {
  return d == 1 ? std::abs(v.x) : std::hypot(v.x, v.y);
}

}  // namespace swl

#endif
