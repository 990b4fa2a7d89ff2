#include "c2aug/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace c2aug::kern {

#if defined(C2AUG_HAVE_AVX2)
const Kernels* avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if defined(C2AUG_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return avx2_kernels_impl();
#endif
  return nullptr;
}

namespace {

const Kernels* g_active = nullptr;

const Kernels* pick_backend() {
  if (const char* env = std::getenv("C2AUG_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    if (std::strcmp(env, "avx2") == 0) {
      if (const Kernels* k = avx2_kernels()) return k;
      throw std::runtime_error("C2AUG_KERNELS=avx2 but AVX2 is unavailable");
    }
    throw std::runtime_error("unknown C2AUG_KERNELS backend");
  }
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

}  // namespace

const Kernels& active() {
  if (!g_active) g_active = pick_backend();
  return *g_active;
}

void force_backend(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_active = &scalar_kernels();
    return;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (const Kernels* k = avx2_kernels()) {
      g_active = k;
      return;
    }
    throw std::runtime_error("AVX2 backend unavailable on this machine");
  }
  throw std::runtime_error("unknown kernel backend");
}

}  // namespace c2aug::kern
