#include <atomic>
#include <cstdlib>
#include <string>

#include "hts/error.hpp"
#include "hts/simd/kernels.hpp"

namespace hts::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(HTS_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  const char* env = std::getenv("HTS_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_kernels();
#if defined(HTS_HAVE_AVX2_KERNELS)
  if (cpu_has_avx2()) return &detail::avx2_kernels();
#endif
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

bool backend_available(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels_for(Backend backend) {
  if (!backend_available(backend)) {
    throw InvalidParameter("SIMD backend not available on this CPU: " + std::string(backend_name(backend)));
  }
#if defined(HTS_HAVE_AVX2_KERNELS)
  if (backend == Backend::Avx2) return detail::avx2_kernels();
#endif
  return scalar_kernels();
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_active(Backend backend) { active_slot().store(&kernels_for(backend), std::memory_order_release); }

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace hts::simd
