#include "swl/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace swl {

namespace {

std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> g_plans;

fftw_plan get_plan(int dimension, int n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  const auto key = std::make_tuple(dimension, n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  const std::size_t total =
      dimension == 1 ? static_cast<std::size_t>(n)
                     : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<std::complex<double>> tmp(total);
  auto* ptr = reinterpret_cast<fftw_complex*>(tmp.data());
  fftw_plan plan =
      dimension == 1
          ? fftw_plan_dft_1d(n, ptr, ptr, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
          : fftw_plan_dft_2d(n, n, ptr, ptr, sign,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  g_plans.emplace(key, plan);
  return plan;
}

void execute(int dimension, int n, int sign,
             std::vector<std::complex<double>>& io) {
  const std::size_t total =
      dimension == 1 ? static_cast<std::size_t>(n)
                     : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (io.size() != total) throw std::runtime_error("fft buffer size mismatch");
  fftw_plan plan = get_plan(dimension, n, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(io.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void fft_forward(int dimension, int n, std::vector<std::complex<double>>& io) {
  execute(dimension, n, FFTW_FORWARD, io);
}

void fft_backward(int dimension, int n, std::vector<std::complex<double>>& io) {
  execute(dimension, n, FFTW_BACKWARD, io);
}

}  // namespace swl
