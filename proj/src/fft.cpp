#include "mkdv/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace mkdv::fft {
namespace {

struct PlanPair {
  fftw_complex* buf_in = nullptr;
  fftw_complex* buf_out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_mutex;

PlanPair& plan_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;  // leaked at exit on purpose
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  PlanPair p;
  p.buf_in = fftw_alloc_complex(n);
  p.buf_out = fftw_alloc_complex(n);
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n), p.buf_in, p.buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n), p.buf_in, p.buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  return cache.emplace(n, p).first->second;
}

void run(const std::complex<double>* in, std::complex<double>* out, std::size_t n, bool fwd) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanPair& p = plan_for(n);
  // std::complex<double> is layout-compatible with fftw_complex (double[2]).
  std::memcpy(static_cast<void*>(p.buf_in), static_cast<const void*>(in),
              n * sizeof(fftw_complex));
  fftw_execute(fwd ? p.fwd : p.bwd);
  std::memcpy(static_cast<void*>(out), static_cast<const void*>(p.buf_out),
              n * sizeof(fftw_complex));
}

}  // namespace

void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
  run(in, out, n, true);
}

void backward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
  run(in, out, n, false);
}

}  // namespace mkdv::fft
