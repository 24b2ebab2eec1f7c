#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant. The
// active table is chosen once at first use from the running CPU; the
// HTS_SIMD environment variable ("scalar" or "avx2") overrides it.

#include <cstddef>
#include <span>
#include <string_view>

namespace hts::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  // ext has n + taps entries with ext[i] = x[i mod n]; writes n/2 outputs each.
  void (*analysis_step)(const double* ext, std::size_t n, const double* lo, const double* hi,
                        std::size_t taps, double* out_lo, double* out_hi);
  // lo_ext/hi_ext have half + taps/2 entries with ext[q] = c[(q - taps/2) mod half];
  // writes 2 * half outputs.
  void (*synthesis_step)(const double* lo_ext, const double* hi_ext, std::size_t half,
                         const double* lo, const double* hi, std::size_t taps, double* out);
  void (*soft_threshold)(const double* in, std::size_t n, double t, double* out);
  double (*sum_abs)(const double* x, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, std::size_t n, double* y);
};

const KernelTable& scalar_kernels() noexcept;
bool backend_available(Backend backend) noexcept;
/// Table for a specific backend; throws InvalidParameter when unavailable.
const KernelTable& kernels_for(Backend backend);
const KernelTable& active() noexcept;
void set_active(Backend backend);
std::string_view backend_name(Backend backend) noexcept;

inline double sum_abs(std::span<const double> x) { return active().sum_abs(x.data(), x.size()); }
inline double sum_sq(std::span<const double> x) { return active().sum_sq(x.data(), x.size()); }
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

namespace detail {
#if defined(HTS_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernels() noexcept;
#endif
}  // namespace detail

}  // namespace hts::simd
