#pragma once

// Periodized orthonormal discrete wavelet transform. Coefficients use the flat
// layout of hts/layout.hpp: the 2^J0 scaling coefficients fill [0, 2^J0) and
// detail level j >= J0 fills [2^j, 2^{j+1}).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hts {

enum class FilterKind { Haar, Daubechies4, Daubechies8, Symmlet8 };

class Filter {
 public:
  static Filter make(FilterKind kind);
  /// Parses "haar", "daubechies2", "daubechies4", "daubechies8" or "symmlet8".
  static Filter from_name(const std::string& name);

  FilterKind kind() const noexcept { return kind_; }
  std::string name() const;
  const std::vector<double>& lowpass() const noexcept { return lo_; }
  const std::vector<double>& highpass() const noexcept { return hi_; }
  std::size_t taps() const noexcept { return lo_.size(); }

  /// max |sum_m h[m] h[m + 2l] - delta_l|, and |sum h - sqrt 2|.
  double orthonormality_defect() const;
  double dc_defect() const;

 private:
  Filter(FilterKind kind, std::vector<double> lo);

  FilterKind kind_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

class WaveletFrame {
 public:
  /// Signal length 2^levels; scaling coefficients kept at coarse_level.
  WaveletFrame(Filter filter, int levels, int coarse_level = 5);

  const Filter& filter() const noexcept { return filter_; }
  int levels() const noexcept { return levels_; }
  int coarse_level() const noexcept { return coarse_; }
  std::size_t size() const noexcept { return std::size_t{1} << levels_; }

  /// Frame level of a flat coordinate: -1 for scaling coefficients.
  int level_of(std::size_t flat) const;

  std::vector<double> analyze(std::span<const double> samples) const;
  std::vector<double> synthesize(std::span<const double> coefficients) const;

 private:
  Filter filter_;
  int levels_;
  int coarse_;
};

/// l_p norm of the dyadic level-j slice of a flat array; p = inf gives the max.
double level_norm(std::span<const double> coefficients, int j, double p);

}  // namespace hts
