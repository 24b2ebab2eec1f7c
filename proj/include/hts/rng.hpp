#pragma once

// Counter-based random numbers (Philox4x32-10). Every random quantity in the
// library is a pure function of (seed, stream, index, position), so work keyed
// by coordinate can be evaluated in any order or in parallel.

#include <array>
#include <cstdint>

namespace hts {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten-round Philox 4x32 bijection.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Purpose tags; distinct streams never share counters.
enum class Stream : std::uint32_t {
  Noise = 1,
  Prior = 2,
  Sampler = 3,
  Hyper = 4,
  StickBreaking = 5,
  Replication = 6,
  Test = 99,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept;

  std::uint32_t next_u32() noexcept;
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;
  /// Standard Cauchy via the inverse CDF.
  double cauchy() noexcept;
  /// Exponential with the given rate.
  double exponential(double rate) noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  void refill() noexcept;

  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// The single standard normal draw keyed by (seed, stream, index).
double keyed_normal(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept;

/// Derives an independent 64-bit seed, e.g. one per replication.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace hts
