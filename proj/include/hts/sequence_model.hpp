#pragma once

// The normal sequence model X_k = f_k + xi_k / sqrt(n) over a cosine, sine or
// wavelet basis of L2[0,1].

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hts/wavelets.hpp"

namespace hts {

enum class BasisKind { CosineHalfShift, Sine, Wavelet };

class BasisDescriptor {
 public:
  /// phi_k(t) = sqrt 2 cos(pi (k - 1/2) t), k >= 1
  static BasisDescriptor cosine();
  /// phi_k(t) = sqrt 2 sin(pi k t), k >= 1
  static BasisDescriptor sine();
  static BasisDescriptor wavelet(WaveletFrame frame);

  BasisKind kind() const noexcept { return kind_; }
  bool is_wavelet() const noexcept { return kind_ == BasisKind::Wavelet; }
  /// Throws StateError for non-wavelet bases.
  const WaveletFrame& frame() const;
  std::string name() const;

  /// phi_k(t) for the single-index bases.
  double evaluate(std::size_t k, double t) const;

 private:
  explicit BasisDescriptor(BasisKind kind, std::shared_ptr<const WaveletFrame> frame = nullptr)
      : kind_(kind), frame_(std::move(frame)) {}

  BasisKind kind_;
  std::shared_ptr<const WaveletFrame> frame_;
};

struct SobolevClass {
  double beta;
  double radius;
};
struct BesovClass {
  double s, p, q;
  double radius;
};
using DeclaredClass = std::variant<SobolevClass, BesovClass>;

struct TrueSignal {
  std::vector<double> coefficients;
  BasisDescriptor basis;
  std::optional<DeclaredClass> declared_class;

  /// Throws InvalidInput for non-finite coefficients or a violated class bound.
  void validate() const;
};

struct SequenceData {
  std::vector<double> observations;
  double noise_precision;
  std::size_t truncation;
  BasisDescriptor basis;
  std::uint64_t seed;
};

/// X_c = f_c + xi_c / sqrt(n) for c < K, with xi_c keyed by (seed, c). Wavelet
/// truths require K equal to the frame size.
SequenceData simulate(const TrueSignal& truth, double noise_precision, std::size_t truncation, std::uint64_t seed);

/// t_i = i / (m - 1), i = 0..m-1
std::vector<double> uniform_grid(std::size_t m);

/// Row-major table phi_k(t_i) for k = 1..K on the uniform grid of m points.
class BasisMatrix {
 public:
  BasisMatrix(const BasisDescriptor& basis, std::size_t count, std::size_t grid);

  std::size_t count() const noexcept { return count_; }
  std::size_t grid() const noexcept { return grid_; }
  /// Values of sum_k c_k phi_k on the grid; extra coefficients beyond count are
  /// rejected.
  std::vector<double> synthesize(std::span<const double> coefficients) const;
  void synthesize_into(std::span<const double> coefficients, std::span<double> out) const;

 private:
  std::size_t count_;
  std::size_t grid_;
  std::vector<double> table_;  // count_ rows of grid_ values
};

/// Function values of a coefficient sequence: uniform grid of m points for
/// cosine/sine, inverse transform for wavelets (m must equal the frame size).
std::vector<double> synthesize(std::span<const double> coefficients, const BasisDescriptor& basis, std::size_t m);

}  // namespace hts
