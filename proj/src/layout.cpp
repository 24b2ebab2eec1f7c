#include "hts/layout.hpp"

#include <bit>

#include "hts/error.hpp"

namespace hts {

LevelIndex flat_to_level(std::size_t flat) noexcept {
  if (flat == 0) return {-1, 0};
  const int j = std::bit_width(flat) - 1;
  return {j, flat - (std::size_t{1} << j)};
}

std::size_t level_begin(int j) {
  if (j < -1) throw InvalidParameter("level index below -1");
  return j == -1 ? 0 : (std::size_t{1} << j);
}

std::size_t level_size(int j) {
  if (j < -1) throw InvalidParameter("level index below -1");
  return j == -1 ? 1 : (std::size_t{1} << j);
}

std::size_t level_to_flat(int j, std::size_t k) {
  if (k >= level_size(j)) throw InvalidParameter("position outside level");
  return level_begin(j) + k;
}

int max_level(std::size_t size) {
  if (size == 0 || !std::has_single_bit(size)) throw ShapeError("coefficient count is not a power of two");
  return std::bit_width(size) - 2;
}

}  // namespace hts
