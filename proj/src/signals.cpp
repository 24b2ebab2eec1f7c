#include "hts/signals.hpp"

#include <array>
#include <limits>
#include <cmath>
#include <numbers>

#include "hts/error.hpp"
#include "hts/layout.hpp"
#include "hts/rng.hpp"
#include "hts/spaces.hpp"

namespace hts {

namespace {

// Jump and bump constants of the Donoho-Johnstone test functions, as in
// Wavelab's MakeSignal.
constexpr std::array<double, 11> kPos = {.1, .13, .15, .23, .25, .40, .44, .65, .76, .78, .81};
constexpr std::array<double, 11> kBlockHeight = {4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
constexpr std::array<double, 11> kBumpHeight = {4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
constexpr std::array<double, 11> kBumpWidth = {.005, .005, .006, .01, .01, .03, .01, .01, .005, .008, .005};

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

TrueSignal truth_sobolev_cos(std::size_t K) {
  if (K < 1) throw InvalidParameter("K must be >= 1");
  std::vector<double> f(K);
  for (std::size_t c = 0; c < K; ++c) {
    const double k = static_cast<double>(c + 1);
    f[c] = std::pow(k, -1.5) * std::sin(k);
  }
  return TrueSignal{std::move(f), BasisDescriptor::cosine(), std::nullopt};
}

TrueSignal truth_sobolev_sine(std::size_t K) {
  if (K < 1) throw InvalidParameter("K must be >= 1");
  std::vector<double> f(K);
  for (std::size_t c = 0; c < K; ++c) {
    const double k = static_cast<double>(c + 1);
    f[c] = std::pow(k, -2.25) * std::sin(10.0 * k);
  }
  // regularity just below 1.75; the radius is the norm at the stored length
  const double radius = sobolev_norm(f, 1.75);
  return TrueSignal{std::move(f), BasisDescriptor::sine(), SobolevClass{1.75, radius}};
}

DjSignal dj_signal_from_name(const std::string& name) {
  if (name == "blocks") return DjSignal::Blocks;
  if (name == "bumps") return DjSignal::Bumps;
  if (name == "doppler") return DjSignal::Doppler;
  if (name == "heavisine") return DjSignal::HeaviSine;
  throw InvalidParameter("unknown test signal '" + name + "'");
}

std::string dj_signal_name(DjSignal which) {
  switch (which) {
    case DjSignal::Blocks:
      return "blocks";
    case DjSignal::Bumps:
      return "bumps";
    case DjSignal::Doppler:
      return "doppler";
    case DjSignal::HeaviSine:
      return "heavisine";
  }
  return "unknown";
}

double dj_function(DjSignal which, double t) {
  double v = 0.0;
  switch (which) {
    case DjSignal::Blocks:
      for (std::size_t j = 0; j < kPos.size(); ++j) v += kBlockHeight[j] * (1.0 + sgn(t - kPos[j])) / 2.0;
      return v;
    case DjSignal::Bumps:
      for (std::size_t j = 0; j < kPos.size(); ++j) v += kBumpHeight[j] * std::pow(1.0 + std::abs((t - kPos[j]) / kBumpWidth[j]), -4.0);
      return v;
    case DjSignal::Doppler:
      return std::sqrt(t * (1.0 - t)) * std::sin(2.1 * std::numbers::pi / (t + 0.05));
    case DjSignal::HeaviSine:
      return 4.0 * std::sin(4.0 * std::numbers::pi * t) - sgn(t - 0.3) - sgn(0.72 - t);
  }
  return v;
}

TrueSignal truth_dj_quartet(DjSignal which, const WaveletFrame& frame, double snr, double noise_precision) {
  if (!(snr > 0.0) || !(noise_precision > 0.0)) throw InvalidParameter("snr and noise precision must be positive");
  const std::size_t N = frame.size();
  std::vector<double> x(N);
  double ss = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    x[i] = dj_function(which, static_cast<double>(i + 1) / static_cast<double>(N));
    ss += x[i] * x[i];
  }
  const double rms = std::sqrt(ss / static_cast<double>(N));
  const double factor = snr / (rms * std::sqrt(noise_precision));
  for (double& v : x) v *= factor;
  return TrueSignal{frame.analyze(x), BasisDescriptor::wavelet(frame), std::nullopt};
}

std::vector<double> stick_breaking_weights(std::size_t count, std::uint64_t seed, std::uint64_t index) {
  if (count < 1) throw InvalidParameter("need at least one stick");
  RandomStream rs(seed, Stream::StickBreaking, index);
  constexpr double kQuantum = 0x1.0p-40;
  std::vector<double> w(count, 0.0);
  double remaining = 1.0;
  for (std::size_t m = 0; m + 1 < count; ++m) {
    // exact multiples of 2^-40 keep every partial sum exact
    const double stick = std::floor(rs.uniform() * remaining / kQuantum) * kQuantum;
    w[m] = stick;
    remaining -= stick;
  }
  w[count - 1] = remaining;
  for (std::size_t m = count - 1; m > 0; --m) std::swap(w[m], w[rs.below(m + 1)]);
  return w;
}

TrueSignal truth_least_favorable(const StickBreakingSpec& spec, const WaveletFrame& frame) {
  if (spec.level < frame.coarse_level() || spec.level >= frame.levels()) {
    throw InvalidParameter("least-favourable level outside the detail levels of the frame");
  }
  const std::size_t d = level_size(spec.level);
  const auto w = stick_breaking_weights(d, spec.seed, static_cast<std::uint64_t>(spec.level));
  RandomStream signs(spec.seed, Stream::StickBreaking, 1000 + static_cast<std::uint64_t>(spec.level));
  std::vector<double> f(frame.size(), 0.0);
  const double scale = spec.target_norm * std::exp2(-spec.level);
  for (std::size_t k = 0; k < d; ++k) {
    const double sign = (signs.next_u32() & 1u) ? 1.0 : -1.0;
    f[level_begin(spec.level) + k] = sign * scale * w[k];
  }
  return TrueSignal{std::move(f), BasisDescriptor::wavelet(frame), BesovClass{1.5, 1.0, std::numeric_limits<double>::infinity(), spec.target_norm}};
}

}  // namespace hts
