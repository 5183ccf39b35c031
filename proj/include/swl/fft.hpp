#ifndef SWL_FFT_HPP
#define SWL_FFT_HPP

#include <complex>
#include <vector>

namespace swl {

// Thin wrapper over FFTW complex transforms.  Plans are cached per
// (dimension, n, sign) behind a mutex; execution is thread-safe on distinct
// buffers.  All plans use FFTW_ESTIMATE, so planning is deterministic and the
// input arrays are never clobbered at plan time.
//
// Transforms are unnormalized: backward(forward(x)) == N * x.
void fft_forward(int dimension, int n, std::vector<std::complex<double>>& io);
void fft_backward(int dimension, int n, std::vector<std::complex<double>>& io);

}  // namespace swl

#endif
