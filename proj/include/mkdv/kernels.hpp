#pragma once
#include <complex>
#include <cstddef>

// Hot elementwise/reduction loops behind a runtime-dispatched table.
// The scalar backend is the reference; the AVX2 backend must be bit-identical:
//   - elementwise ops use the same multiply/add structure (no FMA contraction,
//     complex product written as (ar*br - ai*bi, ar*bi + ai*br)),
//   - reductions use a fixed 4-lane strided accumulation with the lanes
//     combined as (l0+l1)+(l2+l3), so the floating-point schedule is the same
//     regardless of backend. This keeps results deterministic across runs and
//     lets the equivalence tests demand exact equality.

namespace mkdv::kernels {

using cplx = std::complex<double>;

struct Ops {
  const char* name;

  void (*vmul_cc)(cplx* dst, const cplx* a, const cplx* b, std::size_t n);
  void (*vmul_cr)(cplx* dst, const cplx* a, const double* w, std::size_t n);
  void (*vmul_rr)(double* dst, const double* a, const double* b, std::size_t n);
  void (*vcube)(double* dst, const double* u, std::size_t n);
  // dst = a*x + b*y, all complex arrays (integrating-factor stage combine).
  void (*vfma2_cc)(cplx* dst, const cplx* a, const cplx* x, const cplx* b,
                   const cplx* y, std::size_t n);
  // dst = e*u + a*x + b*y + c*z, all complex arrays (ETDRK4 stage combine).
  void (*vfma4_cc)(cplx* dst, const cplx* e, const cplx* u, const cplx* a,
                   const cplx* x, const cplx* b, const cplx* y, const cplx* c,
                   const cplx* z, std::size_t n);

  double (*sum)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*dot3)(const double* a, const double* b, const double* w, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
};

const Ops& scalar_ops();
const Ops* avx2_ops();   // nullptr if the AVX2 TU was not built
const Ops& active();     // cpuid-selected (honors force_scalar)
const char* active_isa();
void force_scalar(bool on);  // test hook

}  // namespace mkdv::kernels
