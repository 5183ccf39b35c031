#ifndef SWL_STATS_HPP
#define SWL_STATS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "swl/averaging.hpp"
#include "swl/solver.hpp"

namespace swl {

// Kolmogorov-Smirnov distance to N(0,1): sup_x |F_n(x) - Phi(x)|.
double ks_to_standard_normal(std::vector<double> samples);

// 1/2 L^1 distance on [-6,6] between a Gaussian-kernel density estimate
// (Silverman bandwidth) and the standard normal density.  Lower bound proxy
// for the total variation distance.  Needs >= 200 samples.
double tv_proxy(const std::vector<double>& samples, double grid_step = 0.005);

double normal_cdf(double x);

struct RateFit {
  double slope = 0.0;
  double std_error = 0.0;
  double r_squared = 0.0;
  std::vector<double> r_list;
};

// Least squares slope of log(y) against log(x); y entries must be positive.
RateFit fit_log_log(const std::vector<double>& xs,
                    const std::vector<double>& ys);

enum class CovTargetMode { AdditiveClosedForm, MonteCarlo };

// omega_d int Cov(u(t1,xi), u(t2,0)) dxi.  The closed form
// omega_d c^2 ||gamma||_1 int_0^{t1^t2} (t1-s)(t2-s) ds is only valid for
// constant sigma == c; ModeMismatch otherwise.
double limit_covariance_target(const SpatialKernel& kernel,
                               const SigmaSpec& sigma, double t1, double t2,
                               CovTargetMode mode);

struct McSetup;

// Monte Carlo estimate of omega_d int Cov(u(t1,xi), u(t2,0)) dxi by spatial
// quadrature of the empirical covariance over replicas.
double limit_covariance_mc(const McSetup& setup, double t1, double t2,
                           int replicas);

// Shared experiment sizing: grids are auto-fitted per R at fixed (dx, dt).
struct McSetup {
  SpatialKernel kernel;
  SigmaSpec sigma;
  int dimension = 1;
  double dx = 0.05;
  double dt = 0.025;
  std::uint64_t base_seed = 1;
  int threads = 1;
};

struct CltPerRadius {
  double R = 0.0;
  int n_replicas = 0;
  double sigma2 = 0.0;
  double sigma2_se = 0.0;
  double ks = 0.0;
  double tv = 0.0;
  double var_density = 0.0;  // sigma2 / R^d
};

struct CltReport {
  double t = 0.0;
  std::vector<CltPerRadius> per_r;
  RateFit ks_fit;
  RateFit tv_fit;
  std::optional<double> limit_var_target;  // additive closed form when valid
};

// Simulates `replicas[i]` fields at radius r_list[i], standardizes F_R(t)
// and records normality distances plus the fitted decay exponents.
CltReport clt_experiment(const McSetup& setup, double t,
                         const std::vector<double>& r_list,
                         const std::vector<int>& replicas);

struct FddReport {
  std::vector<double> t_list;
  double R = 0.0;
  int n_replicas = 0;
  std::vector<std::vector<double>> cov_emp;
  std::vector<std::vector<double>> cov_se;
  std::vector<std::vector<double>> cov_target;  // NaN entries when no target
  double max_abs_z = 0.0;  // against targets, where defined
  std::vector<double> projection_ks;
  // Raw scaled samples [time][replica] for oracle-side reuse.
  std::vector<std::vector<double>> samples;
};

FddReport fdd_check(const McSetup& setup, const std::vector<double>& t_list,
                    double R, int replicas);

struct TightnessReport {
  double s = 0.0;
  double R = 0.0;
  std::vector<double> gaps;
  std::vector<double> l2_increment;
  RateFit fit;
};

TightnessReport tightness_scan(const McSetup& setup, double s,
                               const std::vector<double>& gaps, double R,
                               int replicas);

struct ErgodicReport {
  Probe probe = Probe::VMinusOne;
  double t = 0.0;
  std::vector<double> r_list;
  std::vector<double> variance;
  std::vector<double> variance_se;
  RateFit fit;
};

ErgodicReport ergodic_decay_scan(const McSetup& setup, Probe g, double t,
                                 const std::vector<double>& r_list,
                                 int replicas);

}  // namespace swl

#endif
