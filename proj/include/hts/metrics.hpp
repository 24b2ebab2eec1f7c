#pragma once

// L_{p'} losses of estimates and posterior draws, replication statistics and
// log-log slope fits.

#include <optional>
#include <span>
#include <vector>

#include "hts/posterior.hpp"
#include "hts/sequence_model.hpp"

namespace hts {

/// Evaluates L_{p'} distances for one basis. p' = 2 is exact in coefficient
/// space; other p' use the normalized Riemann sum of the synthesized
/// difference (uniform grid for cosine/sine, the dyadic sample grid for
/// wavelets), and p' = inf the grid maximum.
class ErrorEvaluator {
 public:
  ErrorEvaluator(const BasisDescriptor& basis, std::size_t coefficient_count, std::size_t grid = 201);

  std::size_t grid() const noexcept { return grid_; }
  double lp_error(std::span<const double> estimate, std::span<const double> truth, double p_prime) const;
  /// One value per entry of p_primes, from a single synthesis.
  std::vector<double> lp_errors(std::span<const double> estimate, std::span<const double> truth,
                                std::span<const double> p_primes) const;
  /// Function values of a coefficient vector on the evaluation grid.
  std::vector<double> function_values(std::span<const double> coefficients) const;

 private:
  BasisDescriptor basis_;
  std::size_t count_;
  std::size_t grid_;
  std::optional<BasisMatrix> matrix_;
};

/// Normalized grid L_p norm: (mean |v|^p)^{1/p}, or max |v| for p = inf.
double grid_norm(std::span<const double> values, double p);

double lp_error(std::span<const double> estimate, std::span<const double> truth, double p_prime,
                const BasisDescriptor& basis, std::size_t grid = 201);

/// Mean over posterior draws of the L_{p'} error, one value per p'.
std::vector<double> contraction_errors(const PosteriorSummary& summary, std::span<const double> truth,
                                       std::span<const double> p_primes, const ErrorEvaluator& eval);
double contraction_error(const PosteriorSummary& summary, std::span<const double> truth, double p_prime,
                         const ErrorEvaluator& eval);

struct SlopeFit {
  double slope;
  double intercept;
  double residual;  // root mean square of the log residuals
};

/// Least squares of log(error) on log(n).
SlopeFit slope_fit(std::span<const double> n, std::span<const double> errors);

struct ReplicationStats {
  double mean;
  double sd;
  double se;  // sd / sqrt(R)
  std::size_t count;
};

ReplicationStats replication_stats(std::span<const double> values);

}  // namespace hts
