#include "hts/sequence_model.hpp"

#include <cmath>
#include <numbers>

#include "hts/error.hpp"
#include "hts/rng.hpp"
#include "hts/simd/kernels.hpp"
#include "hts/spaces.hpp"

namespace hts {

BasisDescriptor BasisDescriptor::cosine() { return BasisDescriptor(BasisKind::CosineHalfShift); }
BasisDescriptor BasisDescriptor::sine() { return BasisDescriptor(BasisKind::Sine); }
BasisDescriptor BasisDescriptor::wavelet(WaveletFrame frame) {
  return BasisDescriptor(BasisKind::Wavelet, std::make_shared<const WaveletFrame>(std::move(frame)));
}

const WaveletFrame& BasisDescriptor::frame() const {
  if (!frame_) throw StateError("basis " + name() + " has no wavelet frame");
  return *frame_;
}

std::string BasisDescriptor::name() const {
  switch (kind_) {
    case BasisKind::CosineHalfShift:
      return "cosine";
    case BasisKind::Sine:
      return "sine";
    case BasisKind::Wavelet:
      return "wavelet-" + frame_->filter().name();
  }
  return "unknown";
}

double BasisDescriptor::evaluate(std::size_t k, double t) const {
  if (k < 1) throw InvalidParameter("basis index starts at 1");
  const double kk = static_cast<double>(k);
  switch (kind_) {
    case BasisKind::CosineHalfShift:
      return std::numbers::sqrt2 * std::cos(std::numbers::pi * (kk - 0.5) * t);
    case BasisKind::Sine:
      return std::numbers::sqrt2 * std::sin(std::numbers::pi * kk * t);
    case BasisKind::Wavelet:
      break;
  }
  throw StateError("pointwise evaluation is not defined for wavelet frames");
}

void TrueSignal::validate() const {
  double energy = 0.0;
  for (double v : coefficients) {
    if (!std::isfinite(v)) throw InvalidInput("truth has a non-finite coefficient");
    energy += v * v;
  }
  if (!std::isfinite(energy)) throw InvalidInput("truth is not square-summable at its stored length");
  if (basis.is_wavelet() && coefficients.size() != basis.frame().size()) {
    throw ShapeError("wavelet truth length differs from its frame");
  }
  if (!declared_class) return;
  if (const auto* sob = std::get_if<SobolevClass>(&*declared_class)) {
    if (sobolev_norm(coefficients, sob->beta) > sob->radius + 1e-9) throw InvalidInput("truth exceeds its Sobolev radius");
  } else if (const auto* bes = std::get_if<BesovClass>(&*declared_class)) {
    if (besov_norm(coefficients, bes->s, bes->p, bes->q) > bes->radius + 1e-9) {
      throw InvalidInput("truth exceeds its Besov radius");
    }
  }
}

SequenceData simulate(const TrueSignal& truth, double noise_precision, std::size_t truncation, std::uint64_t seed) {
  if (!(noise_precision > 0.0) || !std::isfinite(noise_precision)) {
    throw InvalidParameter("noise precision must be positive");
  }
  if (truncation < 1) throw InvalidParameter("truncation must be >= 1");
  if (truth.basis.is_wavelet() && truncation != truth.basis.frame().size()) {
    throw ShapeError("wavelet data must cover the whole frame");
  }
  const double sd = 1.0 / std::sqrt(noise_precision);
  SequenceData data{std::vector<double>(truncation), noise_precision, truncation, truth.basis, seed};
  for (std::size_t c = 0; c < truncation; ++c) {
    const double f = c < truth.coefficients.size() ? truth.coefficients[c] : 0.0;
    data.observations[c] = f + sd * keyed_normal(seed, Stream::Noise, c);
  }
  return data;
}

std::vector<double> uniform_grid(std::size_t m) {
  if (m < 2) throw InvalidParameter("grid needs at least two points");
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  return t;
}

BasisMatrix::BasisMatrix(const BasisDescriptor& basis, std::size_t count, std::size_t grid)
    : count_(count), grid_(grid), table_(count * grid) {
  if (basis.is_wavelet()) throw InvalidParameter("basis matrix is for cosine/sine bases");
  const auto t = uniform_grid(grid);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < grid; ++i) table_[k * grid + i] = basis.evaluate(k + 1, t[i]);
  }
}

void BasisMatrix::synthesize_into(std::span<const double> coefficients, std::span<double> out) const {
  if (coefficients.size() > count_) throw ShapeError("more coefficients than basis functions");
  if (out.size() != grid_) throw ShapeError("output length differs from the grid");
  std::fill(out.begin(), out.end(), 0.0);
  const auto& k = simd::active();
  for (std::size_t c = 0; c < coefficients.size(); ++c) {
    if (coefficients[c] != 0.0) k.axpy(coefficients[c], table_.data() + c * grid_, grid_, out.data());
  }
}

std::vector<double> BasisMatrix::synthesize(std::span<const double> coefficients) const {
  std::vector<double> out(grid_);
  synthesize_into(coefficients, out);
  return out;
}

std::vector<double> synthesize(std::span<const double> coefficients, const BasisDescriptor& basis, std::size_t m) {
  if (basis.is_wavelet()) {
    if (m != basis.frame().size()) throw ShapeError("wavelet synthesis grid must equal the frame length");
    return basis.frame().synthesize(coefficients);
  }
  return BasisMatrix(basis, coefficients.size(), m).synthesize(coefficients);
}

}  // namespace hts
