#include <algorithm>
#include <cmath>

#include "hts/simd/kernels.hpp"

namespace hts::simd {

namespace {

void analysis_step(const double* ext, std::size_t n, const double* lo, const double* hi,
                   std::size_t taps, double* out_lo, double* out_hi) {
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double* window = ext + 2 * i;
    double a = 0.0;
    double d = 0.0;
    for (std::size_t m = 0; m < taps; ++m) {
      a += lo[m] * window[m];
      d += hi[m] * window[m];
    }
    out_lo[i] = a;
    out_hi[i] = d;
  }
}

void synthesis_step(const double* lo_ext, const double* hi_ext, std::size_t half, const double* lo,
                    const double* hi, std::size_t taps, double* out) {
  const std::size_t r_count = taps / 2;
  for (std::size_t s = 0; s < half; ++s) {
    double even = 0.0;
    double odd = 0.0;
    for (std::size_t r = 0; r < r_count; ++r) {
      const double a = lo_ext[s + r_count - r];
      const double d = hi_ext[s + r_count - r];
      even += lo[2 * r] * a + hi[2 * r] * d;
      odd += lo[2 * r + 1] * a + hi[2 * r + 1] * d;
    }
    out[2 * s] = even;
    out[2 * s + 1] = odd;
  }
}

void soft_threshold(const double* in, std::size_t n, double t, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::copysign(std::max(std::abs(in[i]) - t, 0.0), in[i]);
  }
}

double sum_abs(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(x[i]);
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

void axpy(double a, const double* x, std::size_t n, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

constexpr KernelTable kScalar{Backend::Scalar, analysis_step, synthesis_step, soft_threshold,
                              sum_abs,         sum_sq,        max_abs,        axpy};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace hts::simd
