#pragma once
#include <complex>
#include <cstddef>

namespace mkdv {

// Thin process-wide FFTW3 wrapper. Plans are cached per size, created with
// FFTW_ESTIMATE so planning is deterministic run-to-run, and executed under a
// mutex (fftw_execute on a cached plan reuses the plan's buffers).
// Unnormalized complex DFTs:
//   forward:  X_j = sum_i e^{-2*pi*i*ij/n} x_i
//   backward: x_i = sum_j e^{+2*pi*i*ij/n} X_j
namespace fft {

void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);
void backward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);

}  // namespace fft
}  // namespace mkdv
