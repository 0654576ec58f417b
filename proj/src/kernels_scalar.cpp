#include <cmath>

#include "mkdv/kernels.hpp"

// Reference backend. The 4-lane reduction layout mirrors one AVX2 register:
// lane l accumulates elements 4i+l, the tail feeds lanes 0..r-1, and the
// lanes collapse as (l0+l1)+(l2+l3).

namespace mkdv::kernels {
namespace scalar {

static void vmul_cc(cplx* dst, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    dst[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

static void vmul_cr(cplx* dst, const cplx* a, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    dst[i] = cplx(a[i].real() * w[i], a[i].imag() * w[i]);
}

static void vmul_rr(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

static void vcube(double* dst, const double* u, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = (u[i] * u[i]) * u[i];
}

static inline cplx cmul(const cplx& a, const cplx& b) {
  return cplx(a.real() * b.real() - a.imag() * b.imag(),
              a.real() * b.imag() + a.imag() * b.real());
}

static void vfma2_cc(cplx* dst, const cplx* a, const cplx* x, const cplx* b,
                     const cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = cmul(a[i], x[i]) + cmul(b[i], y[i]);
}

static void vfma4_cc(cplx* dst, const cplx* e, const cplx* u, const cplx* a,
                     const cplx* x, const cplx* b, const cplx* y, const cplx* c,
                     const cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx r = cmul(e[i], u[i]);
    r += cmul(a[i], x[i]);
    r += cmul(b[i], y[i]);
    r += cmul(c[i], z[i]);
    dst[i] = r;
  }
}

static void tail_into(double* acc4, double v, std::size_t lane) { acc4[lane] += v; }

static double sum(const double* a, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += a[i];
    acc[1] += a[i + 1];
    acc[2] += a[i + 2];
    acc[3] += a[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) tail_into(acc, a[i], i - n4);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

static double dot(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += a[i] * b[i];
    acc[1] += a[i + 1] * b[i + 1];
    acc[2] += a[i + 2] * b[i + 2];
    acc[3] += a[i + 3] * b[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) tail_into(acc, a[i] * b[i], i - n4);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

static double dot3(const double* a, const double* b, const double* w, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += (a[i] * b[i]) * w[i];
    acc[1] += (a[i + 1] * b[i + 1]) * w[i + 1];
    acc[2] += (a[i + 2] * b[i + 2]) * w[i + 2];
    acc[3] += (a[i + 3] * b[i + 3]) * w[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) tail_into(acc, (a[i] * b[i]) * w[i], i - n4);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

static double max_abs(const double* a, std::size_t n) {
  double m[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    m[0] = std::max(m[0], std::fabs(a[i]));
    m[1] = std::max(m[1], std::fabs(a[i + 1]));
    m[2] = std::max(m[2], std::fabs(a[i + 2]));
    m[3] = std::max(m[3], std::fabs(a[i + 3]));
  }
  for (std::size_t i = n4; i < n; ++i) m[i - n4] = std::max(m[i - n4], std::fabs(a[i]));
  return std::max(std::max(m[0], m[1]), std::max(m[2], m[3]));
}

}  // namespace scalar

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",          scalar::vmul_cc,  scalar::vmul_cr, scalar::vmul_rr,
      scalar::vcube,     scalar::vfma2_cc, scalar::vfma4_cc, scalar::sum,
      scalar::dot,       scalar::dot3,     scalar::max_abs,
  };
  return ops;
}

}  // namespace mkdv::kernels
