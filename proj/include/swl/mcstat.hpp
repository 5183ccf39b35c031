#ifndef SWL_MCSTAT_HPP
#define SWL_MCSTAT_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "swl/common.hpp"
#include "swl/rng.hpp"

namespace swl {

// Pairwise summation with Kahan compensation at the leaves.  Result depends
// only on element order, never on thread count.
inline double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 32) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = data[i] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw Error(ErrorKind::TooFewSamples, "mean of empty set");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2)
    throw Error(ErrorKind::TooFewSamples, "variance needs >= 2 samples");
  const double m = mean(v);
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
  return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

inline double central_moment(const std::vector<double>& v, int order) {
  const double m = mean(v);
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    p[i] = std::pow(v[i] - m, order);
  return pairwise_sum(p) / static_cast<double>(v.size());
}

inline double skewness(const std::vector<double>& v) {
  const double m2 = central_moment(v, 2);
  return central_moment(v, 3) / std::pow(m2, 1.5);
}

inline double excess_kurtosis(const std::vector<double>& v) {
  const double m2 = central_moment(v, 2);
  return central_moment(v, 4) / (m2 * m2) - 3.0;
}

// Standard errors of skewness / excess kurtosis under approximate normality.
inline double skewness_se(std::size_t n) { return std::sqrt(6.0 / n); }
inline double kurtosis_se(std::size_t n) { return std::sqrt(24.0 / n); }

// Bootstrap standard error of an arbitrary statistic; resampling is driven
// by a counter-based stream, so results are reproducible and order-free.
inline double bootstrap_se(
    const std::vector<double>& samples,
    const std::function<double(const std::vector<double>&)>& statistic,
    int n_resamples, std::uint64_t key) {
  if (samples.size() < 2)
    throw Error(ErrorKind::TooFewSamples, "bootstrap needs >= 2 samples");
  RandomStream stream(derive_key(key, stream_tag::kBootstrap));
  std::vector<double> stats(n_resamples);
  std::vector<double> resample(samples.size());
  std::uint64_t ctr = 0;
  for (int b = 0; b < n_resamples; ++b) {
    for (std::size_t i = 0; i < samples.size(); ++i)
      resample[i] = samples[stream.uniform_index(ctr++, samples.size())];
    stats[b] = statistic(resample);
  }
  const double m = mean(stats);
  std::vector<double> sq(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i)
    sq[i] = (stats[i] - m) * (stats[i] - m);
  return std::sqrt(pairwise_sum(sq) / (stats.size() - 1));
}

}  // namespace swl

#endif
