#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hts/sequence_model.hpp"
#include "hts/wavelets.hpp"

namespace hts {

/// f_k = k^{-3/2} sin(k) on the shifted cosine basis.
TrueSignal truth_sobolev_cos(std::size_t K);
/// f_k = k^{-2.25} sin(10 k) on the sine basis.
TrueSignal truth_sobolev_sine(std::size_t K);

enum class DjSignal { Blocks, Bumps, Doppler, HeaviSine };

DjSignal dj_signal_from_name(const std::string& name);
std::string dj_signal_name(DjSignal which);

/// Raw test function at t in [0, 1].
double dj_function(DjSignal which, double t);

/// Samples dj_function at t_i = (i + 1)/N, rescales them so that
/// rms(samples) * sqrt(n) = snr, and stores the frame coefficients.
TrueSignal truth_dj_quartet(DjSignal which, const WaveletFrame& frame, double snr = 7.0, double noise_precision = 1.0);

struct StickBreakingSpec {
  int level;            // j = 2i
  double target_norm = 20.0;
  std::uint64_t seed = 0;
};

/// Stick-breaking weights on 2^level sticks: non-negative multiples of 2^-40
/// summing to exactly 1, randomly permuted.
std::vector<double> stick_breaking_weights(std::size_t count, std::uint64_t seed, std::uint64_t index);

/// All mass on one level: f_{jk} = target 2^{-j} w_k with Rademacher signs,
/// so the B^{3/2}_{1,inf} norm equals the target.
TrueSignal truth_least_favorable(const StickBreakingSpec& spec, const WaveletFrame& frame);

}  // namespace hts
