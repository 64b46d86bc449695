#include <atomic>
#include <cstdlib>
#include <string>

#include "guesswork/simd/kernels.hpp"

namespace guesswork::simd {

bool cpu_supports_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* select_default() {
  if (const char* env = std::getenv("GUESSWORK_SIMD"); env && std::string(env) == "scalar") {
    return &scalar_kernels();
  }
  if (cpu_supports_avx2()) {
    if (const KernelTable* t = avx2_kernels()) return t;
  }
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{select_default()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void force_backend(Backend b) {
  if (b == Backend::Avx2) {
    const KernelTable* t = avx2_kernels();
    if (t && cpu_supports_avx2()) {
      slot().store(t, std::memory_order_release);
      return;
    }
  }
  slot().store(&scalar_kernels(), std::memory_order_release);
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

}  // namespace guesswork::simd
