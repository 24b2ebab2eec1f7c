#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "hts/simd/kernels.hpp"

namespace hts::simd {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

// ext[2i+m], ext[2i+m+2], ext[2i+m+4], ext[2i+m+6]
inline __m256d load_even(const double* p) {
  const __m256d a = _mm256_loadu_pd(p);
  const __m256d b = _mm256_loadu_pd(p + 4);
  return _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), 0xD8);
}

void analysis_step(const double* ext, std::size_t n, const double* lo, const double* hi,
                   std::size_t taps, double* out_lo, double* out_hi) {
  const std::size_t half = n / 2;
  std::size_t i = 0;
  for (; i + 4 <= half; i += 4) {
    __m256d a = _mm256_setzero_pd();
    __m256d d = _mm256_setzero_pd();
    const double* window = ext + 2 * i;
    for (std::size_t m = 0; m < taps; ++m) {
      const __m256d v = load_even(window + m);
      a = _mm256_fmadd_pd(_mm256_set1_pd(lo[m]), v, a);
      d = _mm256_fmadd_pd(_mm256_set1_pd(hi[m]), v, d);
    }
    _mm256_storeu_pd(out_lo + i, a);
    _mm256_storeu_pd(out_hi + i, d);
  }
  for (; i < half; ++i) {
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
  std::size_t s = 0;
  for (; s + 4 <= half; s += 4) {
    __m256d even = _mm256_setzero_pd();
    __m256d odd = _mm256_setzero_pd();
    for (std::size_t r = 0; r < r_count; ++r) {
      const __m256d a = _mm256_loadu_pd(lo_ext + s + r_count - r);
      const __m256d d = _mm256_loadu_pd(hi_ext + s + r_count - r);
      even = _mm256_fmadd_pd(_mm256_set1_pd(lo[2 * r]), a, even);
      even = _mm256_fmadd_pd(_mm256_set1_pd(hi[2 * r]), d, even);
      odd = _mm256_fmadd_pd(_mm256_set1_pd(lo[2 * r + 1]), a, odd);
      odd = _mm256_fmadd_pd(_mm256_set1_pd(hi[2 * r + 1]), d, odd);
    }
    const __m256d p = _mm256_unpacklo_pd(even, odd);
    const __m256d q = _mm256_unpackhi_pd(even, odd);
    _mm256_storeu_pd(out + 2 * s, _mm256_permute2f128_pd(p, q, 0x20));
    _mm256_storeu_pd(out + 2 * s + 4, _mm256_permute2f128_pd(p, q, 0x31));
  }
  for (; s < half; ++s) {
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
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d thr = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    const __m256d mag = _mm256_max_pd(_mm256_sub_pd(abs_pd(x), thr), zero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(x, sign_mask)));
  }
  for (; i < n; ++i) out[i] = std::copysign(std::max(std::abs(in[i]) - t, 0.0), in[i]);
}

double sum_abs(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, abs_pd(_mm256_loadu_pd(x + i)));
    acc1 = _mm256_add_pd(acc1, abs_pd(_mm256_loadu_pd(x + i + 4)));
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += std::abs(x[i]);
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

void axpy(double a, const double* x, std::size_t n, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

constexpr KernelTable kAvx2{Backend::Avx2, analysis_step, synthesis_step, soft_threshold,
                            sum_abs,       sum_sq,        max_abs,        axpy};

}  // namespace

namespace detail {
const KernelTable& avx2_kernels() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace hts::simd
