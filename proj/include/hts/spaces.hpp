#pragma once

// Sobolev and Besov coefficient norms, and the minimax rate exponent over
// Besov balls under L_{p'} loss.

#include <span>
#include <string>

namespace hts {

enum class Zone { Regular, Sparse, Boundary };

std::string zone_name(Zone zone);

class RateSpec {
 public:
  /// Throws DomainError unless s > (1/p - 1/max(p', 2))_+. p and q may be
  /// infinite; p' must be finite.
  RateSpec(double s, double p, double q, double p_prime);

  double s() const noexcept { return s_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double p_prime() const noexcept { return pp_; }

  /// eta = s p - (p' - p)/2
  double eta() const noexcept;
  /// s' = s - 1/p + 1/p'
  double s_prime() const noexcept;
  Zone zone() const noexcept;
  double rate() const noexcept;

 private:
  double s_, p_, q_, pp_;
};

bool admissible(double s, double p, double p_prime) noexcept;
double regular_rate(double s) noexcept;
double sparse_rate(double s, double p, double p_prime) noexcept;
double rate_exponent(const RateSpec& spec) noexcept;

/// Finite-level Besov norm of a flat double-index array. Index 0 (level -1)
/// carries weight 1, level j >= 0 weight 2^{j(s + 1/2 - 1/p)}.
double besov_norm(std::span<const double> coefficients, double s, double p, double q);

/// (sum_k k^{2 beta} f_k^2)^{1/2} with f_1 stored first.
double sobolev_norm(std::span<const double> coefficients, double beta);

/// True iff B^s_{pq} embeds in B^{s'}_{p'q'} by the dual-index rule
/// (p' > p, s' - 1/p' = s - 1/p, q' = q) or the trivial rule
/// (p' = p and s' < s, or s' = s with q' >= q).
bool embedding_check(double s, double p, double q, double s_prime, double p_prime, double q_prime);

}  // namespace hts
