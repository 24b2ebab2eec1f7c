#pragma once

// Tail densities h of the coefficient variables zeta_k, scaling rules
// sigma_k (or sigma_j for wavelet levels) and the assembled series prior
// f_k = sigma_k * zeta_k. Densities and scalings are carried as logs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hts/rng.hpp"

namespace hts {

enum class TailKind { StudentT, Cauchy, Horseshoe, Gaussian };

/// Constants of the envelope conditions: log(1/h(x)) <= c1 (1 + log^{1+kappa}(1+x))
/// for x >= 0 and x * tail_mass(x) <= c2 for x >= 1.
struct EnvelopeConstants {
  double c1;
  double kappa;
  double c2;
};

class TailFamily {
 public:
  static TailFamily student_t(double df = 3.0);
  static TailFamily cauchy();
  static TailFamily horseshoe();
  static TailFamily gaussian();

  TailKind kind() const noexcept { return kind_; }
  double df() const noexcept { return df_; }
  std::string name() const;

  /// Log density at unit scale. Horseshoe throws PoleError at 0.
  double log_density(double x) const;
  double density(double x) const;
  /// Survival function: integral of h over [x, inf), x >= 0.
  double tail_mass(double x) const;
  /// A point T with tail_mass(T) <= mass.
  double tail_quantile_bound(double mass) const;

  /// Envelope constants certified for the family; empty for the Gaussian,
  /// whose log(1/h) grows like x^2/2.
  std::optional<EnvelopeConstants> envelope() const;
  bool heavy_tailed() const { return envelope().has_value(); }
  bool has_pole() const noexcept { return kind_ == TailKind::Horseshoe; }

  double sample(RandomStream& rs) const;

  friend bool operator==(const TailFamily&, const TailFamily&) = default;

 private:
  TailFamily(TailKind kind, double df);

  TailKind kind_;
  double df_;
  double log_norm_;  // Student-t / Cauchy / Gaussian normalizing constant
};

/// sigma_k = exp(-(log k)^{1+nu})
struct OtScaling {
  double nu;
};
/// sigma_k = k^{-1/2-alpha}
struct HtScaling {
  double alpha;
};
/// sigma_k = tau for k <= k_trunc, coefficient forced to zero beyond.
struct ConstantTruncated {
  double tau;
  std::size_t k_trunc;
};
/// sigma_j = 2^{-j^{1+nu}} shared within level j (nu = 1 gives 2^{-j^2}).
struct WaveletOt {
  double nu;
};
/// sigma_j = tau 2^{-j(1/2+alpha)}; tau and alpha are given random hyperpriors
/// by the Gibbs path and held fixed elsewhere.
struct GaussianHierarchical {
  double tau;
  double alpha;
};

using ScalingRule = std::variant<OtScaling, HtScaling, ConstantTruncated, WaveletOt, GaussianHierarchical>;

bool is_level_rule(const ScalingRule& rule) noexcept;

/// log sigma for single-index k >= 1 or level j >= -1 (sigma_{-1} = sigma_0).
/// Returns -inf beyond a truncation point.
double log_scaling(const ScalingRule& rule, long index);
double scaling_value(const ScalingRule& rule, long index);
/// OT scaling at a real argument k >= 1.
double scaling_value_real(const OtScaling& rule, double k);
/// False where a truncated rule forces the coefficient to zero.
bool scaling_active(const ScalingRule& rule, long index);
std::string scaling_name(const ScalingRule& rule);

enum class IndexMode { Single, Double };

class PriorSpec {
 public:
  /// Throws InvalidParameter for a Gaussian tail on a non-hierarchical rule
  /// unless `baseline` is set.
  PriorSpec(TailFamily tail, ScalingRule scaling, bool baseline = false);

  const TailFamily& tail() const noexcept { return tail_; }
  const ScalingRule& scaling() const noexcept { return scaling_; }
  IndexMode index_mode() const noexcept { return is_level_rule(scaling_) ? IndexMode::Double : IndexMode::Single; }
  bool baseline() const noexcept { return baseline_; }
  bool heavy_tailed() const { return tail_.heavy_tailed(); }
  std::string label() const;

  /// Scaling index of flat coordinate c: k = c + 1, or the level of c with
  /// the first 2^coarse_level coordinates (scaling coefficients) at level -1.
  long index_of(std::size_t coordinate, int coarse_level = 0) const;
  double log_scale(std::size_t coordinate, int coarse_level = 0) const {
    return log_scaling(scaling_, index_of(coordinate, coarse_level));
  }
  bool active(std::size_t coordinate, int coarse_level = 0) const {
    return scaling_active(scaling_, index_of(coordinate, coarse_level));
  }

 private:
  TailFamily tail_;
  ScalingRule scaling_;
  bool baseline_;
};

/// Draws f_c = sigma_c zeta_c for c = 0..count-1, keyed by (seed, c).
std::vector<double> sample_prior(const PriorSpec& spec, std::size_t count, std::uint64_t seed, int coarse_level = 0);

// Horseshoe HS(tau): lambda ~ C+(0,1), t | lambda ~ N(0, tau^2 lambda^2).

double horseshoe_log_density(double t, double tau);
double horseshoe_density(double t, double tau);
/// Bounds from the horseshoe density theorem; lower < h_tau(t) < upper.
std::pair<double, double> horseshoe_sandwich(double t, double tau);
/// (h_tau(t) - lower, upper - h_tau(t)) free of cancellation: for large t/tau
/// the density lies within a relative 2.7 (tau/t)^4 of the lower bound, below
/// double resolution once t/tau exceeds about 1e4.
std::pair<double, double> horseshoe_sandwich_margins(double t, double tau);
/// Survival function of HS(1).
double horseshoe_tail_mass(double x);

/// Gamma(shape, 1) draw (Marsaglia-Tsang).
double sample_gamma(RandomStream& rs, double shape);

}  // namespace hts
