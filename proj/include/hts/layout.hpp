#pragma once

// Flat storage of double-indexed coefficients f_{jk}: index 0 holds (-1, 0),
// and level j >= 0 occupies [2^j, 2^{j+1}). Levels below the coarse level of a
// frame hold scaling coefficients; the bijection is the same for every frame.

#include <cstddef>

namespace hts {

struct LevelIndex {
  int j;
  std::size_t k;
  friend bool operator==(const LevelIndex&, const LevelIndex&) = default;
};

LevelIndex flat_to_level(std::size_t flat) noexcept;
std::size_t level_to_flat(int j, std::size_t k);
std::size_t level_begin(int j);
std::size_t level_size(int j);
/// Highest level present in a flat array of the given size (size must be 2^J).
int max_level(std::size_t size);

}  // namespace hts
