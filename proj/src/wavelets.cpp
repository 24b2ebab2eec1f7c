#include "hts/wavelets.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hts/error.hpp"
#include "hts/layout.hpp"
#include "hts/simd/kernels.hpp"

namespace hts {

namespace {

// Orthonormal low-pass filters, sum = sqrt(2).
const std::vector<double> kHaar = {0.7071067811865476, 0.7071067811865476};

const std::vector<double> kDaub4 = {0.48296291314453416, 0.8365163037378079, 0.2241438680420134,
                                    -0.12940952255126037};

const std::vector<double> kDaub8 = {0.2303778133088965,   0.7148465705529157,  0.6308807679298589,
                                    -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
                                    0.0328830116668852,    -0.010597401785069032};

// Least asymmetric, 8 vanishing moments.
const std::vector<double> kSymm8 = {
    0.0018899503327691333,  -0.0003029205147259922, -0.014952258337061597,  0.003808752013899459,
    0.04913717967372704,    -0.027219029917113172,  -0.051945838107860534,  0.3644418948362278,
    0.7771857516996348,     0.4813596512590049,     -0.061273359067845735,  -0.14329423835126645,
    0.007607487324988558,   0.03169508781152581,    -0.0005421323318030509, -0.0033824159510057964};

}  // namespace

Filter::Filter(FilterKind kind, std::vector<double> lo) : kind_(kind), lo_(std::move(lo)), hi_(lo_.size()) {
  const std::size_t L = lo_.size();
  for (std::size_t m = 0; m < L; ++m) hi_[m] = ((m % 2 == 0) ? 1.0 : -1.0) * lo_[L - 1 - m];
  if (orthonormality_defect() > 1e-12 || dc_defect() > 1e-12) {
    throw InvalidParameter("filter " + name() + " fails its orthonormality self-test");
  }
}

Filter Filter::make(FilterKind kind) {
  switch (kind) {
    case FilterKind::Haar:
      return Filter(kind, kHaar);
    case FilterKind::Daubechies4:
      return Filter(kind, kDaub4);
    case FilterKind::Daubechies8:
      return Filter(kind, kDaub8);
    case FilterKind::Symmlet8:
      return Filter(kind, kSymm8);
  }
  throw InvalidParameter("unknown filter");
}

Filter Filter::from_name(const std::string& name) {
  if (name == "haar" || name == "daubechies2") return make(FilterKind::Haar);
  if (name == "daubechies4") return make(FilterKind::Daubechies4);
  if (name == "daubechies8") return make(FilterKind::Daubechies8);
  if (name == "symmlet8") return make(FilterKind::Symmlet8);
  throw InvalidParameter("unknown wavelet filter '" + name + "'");
}

std::string Filter::name() const {
  switch (kind_) {
    case FilterKind::Haar:
      return "haar";
    case FilterKind::Daubechies4:
      return "daubechies4";
    case FilterKind::Daubechies8:
      return "daubechies8";
    case FilterKind::Symmlet8:
      return "symmlet8";
  }
  return "unknown";
}

double Filter::orthonormality_defect() const {
  const std::size_t L = lo_.size();
  double worst = 0.0;
  for (std::size_t shift = 0; shift < L; shift += 2) {
    double s = 0.0;
    for (std::size_t m = 0; m + shift < L; ++m) s += lo_[m] * lo_[m + shift];
    worst = std::max(worst, std::abs(s - (shift == 0 ? 1.0 : 0.0)));
  }
  return worst;
}

double Filter::dc_defect() const {
  double s = 0.0;
  for (double v : lo_) s += v;
  return std::abs(s - std::numbers::sqrt2);
}

WaveletFrame::WaveletFrame(Filter filter, int levels, int coarse_level)
    : filter_(std::move(filter)), levels_(levels), coarse_(coarse_level) {
  if (levels < 1 || levels > 30) throw InvalidParameter("frame needs 1 <= J <= 30");
  if (coarse_level < 0 || coarse_level >= levels) throw InvalidParameter("coarse level must lie in [0, J)");
}

int WaveletFrame::level_of(std::size_t flat) const {
  if (flat >= size()) throw ShapeError("coordinate outside the frame");
  if (flat < (std::size_t{1} << coarse_)) return -1;
  return flat_to_level(flat).j;
}

std::vector<double> WaveletFrame::analyze(std::span<const double> samples) const {
  if (samples.size() != size()) throw ShapeError("analyze expects " + std::to_string(size()) + " samples");
  const auto& k = simd::active();
  const std::size_t L = filter_.taps();
  std::vector<double> out(samples.begin(), samples.end());
  std::vector<double> ext(size() + L);
  std::vector<double> lo(size() / 2), hi(size() / 2);
  for (std::size_t n = size(); n > (std::size_t{1} << coarse_); n /= 2) {
    for (std::size_t i = 0; i < n + L; ++i) ext[i] = out[i % n];
    k.analysis_step(ext.data(), n, filter_.lowpass().data(), filter_.highpass().data(), L, lo.data(), hi.data());
    std::copy_n(lo.begin(), n / 2, out.begin());
    std::copy_n(hi.begin(), n / 2, out.begin() + static_cast<std::ptrdiff_t>(n / 2));
  }
  return out;
}

std::vector<double> WaveletFrame::synthesize(std::span<const double> coefficients) const {
  if (coefficients.size() != size()) throw ShapeError("synthesize expects " + std::to_string(size()) + " coefficients");
  const auto& k = simd::active();
  const std::size_t L = filter_.taps();
  const std::size_t pad = L / 2;
  std::vector<double> out(coefficients.begin(), coefficients.end());
  std::vector<double> lo_ext(size() / 2 + pad), hi_ext(size() / 2 + pad), merged(size());
  for (std::size_t half = std::size_t{1} << coarse_; half < size(); half *= 2) {
    for (std::size_t q = 0; q < half + pad; ++q) {
      // (q - pad) mod half, for pad possibly larger than half
      const std::size_t src = (q + half * (pad / half + 1) - pad) % half;
      lo_ext[q] = out[src];
      hi_ext[q] = out[half + src];
    }
    k.synthesis_step(lo_ext.data(), hi_ext.data(), half, filter_.lowpass().data(), filter_.highpass().data(), L,
                     merged.data());
    std::copy_n(merged.begin(), 2 * half, out.begin());
  }
  return out;
}

double level_norm(std::span<const double> coefficients, int j, double p) {
  if (!(p >= 1.0)) throw InvalidParameter("level_norm needs p >= 1");
  if (j < -1 || level_begin(j) + level_size(j) > coefficients.size()) throw InvalidParameter("invalid level");
  const auto slice = coefficients.subspan(level_begin(j), level_size(j));
  if (std::isinf(p)) return simd::max_abs(slice);
  if (p == 1.0) return simd::sum_abs(slice);
  if (p == 2.0) return std::sqrt(simd::sum_sq(slice));
  // scale by the max so |x|^p stays in range
  const double m = simd::max_abs(slice);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : slice) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace hts
