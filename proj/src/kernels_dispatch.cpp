#include <atomic>
#include <cstdlib>

#include "mkdv/kernels.hpp"

namespace mkdv::kernels {

#if !defined(MKDV_HAVE_AVX2_TU)
// kernels_avx2.cpp is not in this build; provide the null definition here.
const Ops* avx2_ops() { return nullptr; }
#endif

static std::atomic<bool> g_force_scalar{false};

static bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void force_scalar(bool on) { g_force_scalar.store(on); }

const Ops& active() {
  static const Ops* best = [] {
    if (std::getenv("MKDV_FORCE_SCALAR")) return &scalar_ops();
    const Ops* v = avx2_ops();
    if (v && cpu_has_avx2()) return v;
    return &scalar_ops();
  }();
  return g_force_scalar.load() ? scalar_ops() : *best;
}

const char* active_isa() { return active().name; }

}  // namespace mkdv::kernels
