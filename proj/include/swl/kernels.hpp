#ifndef SWL_KERNELS_HPP
#define SWL_KERNELS_HPP

#include <string>

#include "swl/common.hpp"
#include "swl/quad.hpp"

namespace swl {

enum class KernelFamily { Gaussian, Exponential, Triangle1D };

const char* kernel_family_name(KernelFamily f);
KernelFamily kernel_family_from_name(const std::string& name);

// Spatial covariance kernel gamma with closed-form spectral density.
// All three families are nonnegative, nonnegative definite and integrable;
// Triangle1D is only admissible in dimension 1.
struct SpatialKernel {
  KernelFamily family = KernelFamily::Gaussian;
  double length_scale = 1.0;  // lambda
  double amplitude = 1.0;     // a = gamma(0)
  int dimension = 1;

  static SpatialKernel make(KernelFamily family, double lambda,
                            double amplitude, int dimension);
};

// gamma(x); total, nonnegative, maximized at x = 0.
double gamma_radial(const SpatialKernel& k, double r);
double gamma_at(const SpatialKernel& k, const Vec& x);

// Closed-form Fourier transform of gamma under F f(xi) = int e^{-i x xi} f(x) dx.
// The triangle family takes the Fejer form, extended by continuity at xi = 0.
double spectral_density_radial(const SpatialKernel& k, double rho);
double spectral_density(const SpatialKernel& k, const Vec& xi);

// int gamma, computed in closed form.
double gamma_l1_norm(const SpatialKernel& k);
// ||gamma||_{L^ell}, closed form, ell >= 1.
double gamma_lp_norm(const SpatialKernel& k, double ell);
// int_{-inf}^{z} gamma(x) dx for d = 1 (used for exact G*gamma convolutions).
double gamma_antiderivative_1d(const SpatialKernel& k, double z);

// Effective range used for light-cone padding: lambda for the compactly
// supported triangle, 8*lambda otherwise.
double effective_range(const SpatialKernel& k);

// Spectral measure mu(dxi) = (2pi)^{-d} Fgamma(xi) dxi.  The (2pi)^{-d}
// normalization is pinned by the identity
//   int int G_t(y) G_t(z) gamma(y-z) dy dz = int sin^2(t|xi|)/|xi|^2 mu(dxi),
// which the test suite verifies by double-space quadrature.
double spectral_total_mass(const SpatialKernel& k);  // = gamma(0)
// Upper bound (exact for gaussian/exponential) on mu({|xi| > m}).
double spectral_mass_tail_bound(const SpatialKernel& k, double m);
// mu({|xi| <= m}) by adaptive quadrature.
double spectral_mass_below(const SpatialKernel& k, double m,
                           const QuadBudget& budget, double rel_tol = 1e-9);
// int_{|xi|>m} |xi|^{-2} mu(dxi) by quadrature plus a tail bound.
double spectral_invsq_above(const SpatialKernel& k, double m,
                            const QuadBudget& budget, double rel_tol = 1e-9);

struct DalangReport {
  double integral_value = 0.0;
  bool converged = false;
  double tail_bound = 0.0;
};

// Evaluates int mu(dxi)/(1+|xi|^2), radial in d = 2.
DalangReport check_dalang(const SpatialKernel& k, double rel_tol);

// frak_m(t) = inf_{m>0} [ t^2 mu({|xi|<=m}) + int_{|xi|>m} |xi|^{-2} mu(dxi) ].
// Golden-section search over log m on [1e-3, 1e4] with a fallback grid scan.
double frak_m(const SpatialKernel& k, double t);

// kappa_{p,t,L} = |sigma(0)| + L (sqrt2 + 4 sqrt(p) |sigma(0)| sqrt(t frak_m))
//                 * exp(8 p L^2 t frak_m).
double kappa(double p, double t, double lipschitz, double sigma0,
             const SpatialKernel& k);
// Same formula with frak_m supplied by the caller.
double kappa_given_m(double p, double t, double lipschitz, double sigma0,
                     double frak_m_t);

}  // namespace swl

#endif
