#pragma once

// Soft thresholding baselines: universal threshold, SURE per level and the
// hybrid SureShrink switch between them.

#include <span>
#include <vector>

#include "hts/wavelets.hpp"

namespace hts {

double soft_threshold(double x, double t);
void soft_threshold(std::span<const double> in, double t, std::span<double> out);

/// sqrt(2 log d) for unit noise.
double universal_threshold(std::size_t d);

/// Stein's unbiased risk estimate of soft thresholding unit-noise data at t.
double sure_risk(std::span<const double> x, double t);

/// Minimizer of sure_risk over {0} and the |x_i|; the smallest on ties.
double sure_threshold(std::span<const double> x);

struct LevelThreshold {
  int level;
  double threshold;  // in unit-noise scale
  bool universal;
};

struct ShrinkResult {
  std::vector<double> coefficients;
  std::vector<LevelThreshold> levels;
};

/// Per detail level j >= J0: universal threshold when
/// (sum x^2 - d)/d <= (log2 d)^{3/2}/sqrt d, else min(SURE, universal).
/// Scaling coefficients pass through.
ShrinkResult hybrid_sureshrink_detailed(std::span<const double> coefficients, const WaveletFrame& frame,
                                        double noise_precision);
std::vector<double> hybrid_sureshrink(std::span<const double> coefficients, const WaveletFrame& frame,
                                      double noise_precision);

}  // namespace hts
