#include "hts/thresholding.hpp"

#include <algorithm>
#include <cmath>

#include "hts/error.hpp"
#include "hts/layout.hpp"
#include "hts/simd/kernels.hpp"

namespace hts {

double soft_threshold(double x, double t) {
  if (!(t >= 0.0)) throw InvalidParameter("threshold must be non-negative");
  return std::copysign(std::max(std::abs(x) - t, 0.0), x);
}

void soft_threshold(std::span<const double> in, double t, std::span<double> out) {
  if (!(t >= 0.0)) throw InvalidParameter("threshold must be non-negative");
  if (in.size() != out.size()) throw ShapeError("soft_threshold length mismatch");
  simd::active().soft_threshold(in.data(), in.size(), t, out.data());
}

double universal_threshold(std::size_t d) {
  if (d < 1) throw InvalidParameter("level must be non-empty");
  return std::sqrt(2.0 * std::log(static_cast<double>(d)));
}

double sure_risk(std::span<const double> x, double t) {
  const double d = static_cast<double>(x.size());
  double below = 0.0, clipped = 0.0;
  for (double v : x) {
    if (std::abs(v) <= t) below += 1.0;
    clipped += std::min(v * v, t * t);
  }
  return d - 2.0 * below + clipped;
}

double sure_threshold(std::span<const double> x) {
  const std::size_t d = x.size();
  if (d == 0) return 0.0;
  std::vector<double> sq(d);
  for (std::size_t i = 0; i < d; ++i) sq[i] = x[i] * x[i];
  std::sort(sq.begin(), sq.end());
  const double dd = static_cast<double>(d);

  // risk at 0 counts exact zeros as thresholded
  double best_t = 0.0;
  double best = sure_risk(x, 0.0);
  double prefix = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    prefix += sq[k];
    if (k + 1 < d && sq[k + 1] == sq[k]) continue;
    // t = sqrt(sq[k]): k+1 entries at or below t
    const double kk = static_cast<double>(k + 1);
    const double risk = dd - 2.0 * kk + prefix + (dd - kk) * sq[k];
    if (risk < best) {
      best = risk;
      best_t = std::sqrt(sq[k]);
    }
  }
  return best_t;
}

ShrinkResult hybrid_sureshrink_detailed(std::span<const double> coefficients, const WaveletFrame& frame,
                                        double noise_precision) {
  if (coefficients.size() != frame.size()) throw ShapeError("coefficients do not match the frame");
  if (!(noise_precision > 0.0)) throw InvalidParameter("noise precision must be positive");
  const double root_n = std::sqrt(noise_precision);
  ShrinkResult out{std::vector<double>(coefficients.begin(), coefficients.end()), {}};
  std::vector<double> x;
  for (int j = frame.coarse_level(); j < frame.levels(); ++j) {
    const std::size_t begin = level_begin(j);
    const std::size_t d = level_size(j);
    x.assign(coefficients.begin() + static_cast<std::ptrdiff_t>(begin),
             coefficients.begin() + static_cast<std::ptrdiff_t>(begin + d));
    for (double& v : x) v *= root_n;
    const double dd = static_cast<double>(d);
    const double universal = universal_threshold(d);
    const double s2 = (simd::sum_sq(x) - dd) / dd;
    const double crit = std::pow(std::log2(dd), 1.5) / std::sqrt(dd);
    const bool sparse = s2 <= crit;
    const double t = sparse ? universal : std::min(sure_threshold(x), universal);
    soft_threshold(x, t, x);
    for (std::size_t i = 0; i < d; ++i) out.coefficients[begin + i] = x[i] / root_n;
    out.levels.push_back({j, t, sparse || t == universal});
  }
  return out;
}

std::vector<double> hybrid_sureshrink(std::span<const double> coefficients, const WaveletFrame& frame,
                                      double noise_precision) {
  return hybrid_sureshrink_detailed(coefficients, frame, noise_precision).coefficients;
}

}  // namespace hts
