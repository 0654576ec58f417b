#include "mkdv/kernels.hpp"

// AVX2 backend. Compiled with -mavx2 (and -ffp-contract=off project-wide);
// only reachable through the dispatch table after a cpuid check.
//
// Bit-compatibility contract with the scalar backend:
//   - complex product: re = ar*br - ai*bi, im = ar*bi + ai*br via mul+addsub
//     (same two roundings per component as the scalar code),
//   - reductions: one __m256d accumulator = the scalar backend's 4 lanes,
//     tail handled identically, lanes combined as (l0+l1)+(l2+l3).

#if defined(__AVX2__)
#include <immintrin.h>

#include <cmath>

namespace mkdv::kernels {
namespace avx2 {

// [ar*br - ai*bi, ar*bi + ai*br] for two packed complex numbers.
static inline __m256d cmul4(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);         // [ar0, ar0, ar1, ar1]
  __m256d ai = _mm256_permute_pd(a, 0xF);    // [ai0, ai0, ai1, ai1]
  __m256d bs = _mm256_permute_pd(b, 0x5);    // [bi0, br0, bi1, br1]
  return _mm256_addsub_pd(_mm256_mul_pd(ar, b), _mm256_mul_pd(ai, bs));
}

static void vmul_cc(cplx* dst, const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* pd = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(pd + 2 * i, cmul4(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i)));
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    dst[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

static void vmul_cr(cplx* dst, const cplx* a, const double* w, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  double* pd = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d wv = _mm256_setr_pd(w[i], w[i], w[i + 1], w[i + 1]);
    _mm256_storeu_pd(pd + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * i), wv));
  }
  for (; i < n; ++i) dst[i] = cplx(a[i].real() * w[i], a[i].imag() * w[i]);
}

static void vmul_rr(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) dst[i] = a[i] * b[i];
}

static void vcube(double* dst, const double* u, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(u + i);
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_mul_pd(x, x), x));
  }
  for (; i < n; ++i) dst[i] = (u[i] * u[i]) * u[i];
}

static void vfma2_cc(cplx* dst, const cplx* a, const cplx* x, const cplx* b,
                     const cplx* y, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* px = reinterpret_cast<const double*>(x);
  const double* pb = reinterpret_cast<const double*>(b);
  const double* py = reinterpret_cast<const double*>(y);
  double* pd = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const std::size_t o = 2 * i;
    __m256d r = cmul4(_mm256_loadu_pd(pa + o), _mm256_loadu_pd(px + o));
    r = _mm256_add_pd(r, cmul4(_mm256_loadu_pd(pb + o), _mm256_loadu_pd(py + o)));
    _mm256_storeu_pd(pd + o, r);
  }
  for (; i < n; ++i) {
    auto cm = [](const cplx& p, const cplx& q) {
      return cplx(p.real() * q.real() - p.imag() * q.imag(),
                  p.real() * q.imag() + p.imag() * q.real());
    };
    dst[i] = cm(a[i], x[i]) + cm(b[i], y[i]);
  }
}

static void vfma4_cc(cplx* dst, const cplx* e, const cplx* u, const cplx* a,
                     const cplx* x, const cplx* b, const cplx* y, const cplx* c,
                     const cplx* z, std::size_t n) {
  const double* pe = reinterpret_cast<const double*>(e);
  const double* pu = reinterpret_cast<const double*>(u);
  const double* pa = reinterpret_cast<const double*>(a);
  const double* px = reinterpret_cast<const double*>(x);
  const double* pb = reinterpret_cast<const double*>(b);
  const double* py = reinterpret_cast<const double*>(y);
  const double* pc = reinterpret_cast<const double*>(c);
  const double* pz = reinterpret_cast<const double*>(z);
  double* pd = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const std::size_t o = 2 * i;
    __m256d r = cmul4(_mm256_loadu_pd(pe + o), _mm256_loadu_pd(pu + o));
    r = _mm256_add_pd(r, cmul4(_mm256_loadu_pd(pa + o), _mm256_loadu_pd(px + o)));
    r = _mm256_add_pd(r, cmul4(_mm256_loadu_pd(pb + o), _mm256_loadu_pd(py + o)));
    r = _mm256_add_pd(r, cmul4(_mm256_loadu_pd(pc + o), _mm256_loadu_pd(pz + o)));
    _mm256_storeu_pd(pd + o, r);
  }
  for (; i < n; ++i) {
    auto cm = [](const cplx& p, const cplx& q) {
      return cplx(p.real() * q.real() - p.imag() * q.imag(),
                  p.real() * q.imag() + p.imag() * q.real());
    };
    cplx r = cm(e[i], u[i]);
    r += cm(a[i], x[i]);
    r += cm(b[i], y[i]);
    r += cm(c[i], z[i]);
    dst[i] = r;
  }
}

static inline double collapse(__m256d acc, const double* tail, std::size_t r) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t t = 0; t < r; ++t) lane[t] += tail[t];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

static double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  return collapse(acc, a + n4, n - n4);
}

static double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double tail[3];
  for (std::size_t i = n4; i < n; ++i) tail[i - n4] = a[i] * b[i];
  return collapse(acc, tail, n - n4);
}

static double dot3(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(ab, _mm256_loadu_pd(w + i)));
  }
  double tail[3];
  for (std::size_t i = n4; i < n; ++i) tail[i - n4] = (a[i] * b[i]) * w[i];
  return collapse(acc, tail, n - n4);
}

static double max_abs(const double* a, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4)
    m = _mm256_max_pd(m, _mm256_andnot_pd(signmask, _mm256_loadu_pd(a + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  for (std::size_t i = n4; i < n; ++i)
    lane[i - n4] = std::max(lane[i - n4], std::fabs(a[i]));
  return std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
}

}  // namespace avx2

const Ops* avx2_ops() {
  static const Ops ops = {
      "avx2",        avx2::vmul_cc,  avx2::vmul_cr, avx2::vmul_rr,
      avx2::vcube,   avx2::vfma2_cc, avx2::vfma4_cc, avx2::sum,
      avx2::dot,     avx2::dot3,     avx2::max_abs,
  };
  return &ops;
}

}  // namespace mkdv::kernels

#else  // TU built without AVX2 support

namespace mkdv::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace mkdv::kernels

#endif
