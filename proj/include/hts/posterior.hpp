#pragma once

// Coordinate-wise posterior under f_c = sigma_c zeta_c and X_c ~ N(f_c, 1/n):
// an adaptive quadrature oracle, a Metropolis sampler, the conjugate Gaussian
// path and a Gibbs sampler for the hierarchical Gaussian wavelet prior.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hts/priors.hpp"
#include "hts/quadrature.hpp"
#include "hts/sequence_model.hpp"

namespace hts {

/// Density proportional to exp(-n (x - theta)^2 / 2) h(theta / sigma) / sigma.
struct UnivariatePosterior {
  double x;
  double noise_precision;
  double log_sigma;
  TailFamily tail;

  double log_target(double theta) const;
};

struct QuadratureResult {
  double mean = 0.0;
  double variance = 0.0;
  /// log of the marginal density of x
  double log_normalizer = 0.0;
  double mean_error = 0.0;
  int panels = 0;
  std::vector<quad::MassPoint> masses;  // kept on request, theta ascending
};

QuadratureResult quadrature_mean_var(const UnivariatePosterior& p, double tol = 1e-9, bool keep_masses = false);

/// Quantile of a quadrature result that kept its masses.
double posterior_quantile(const QuadratureResult& r, double prob);

struct MetropolisOptions {
  std::size_t draws = 4000;
  std::size_t burn_in = 2000;
  double target_acceptance = 0.4;
  /// Alternate random-walk steps with independence proposals from an equal
  /// mixture of the prior and N(x, 1/n).
  bool independence_moves = true;
  std::size_t batches = 50;
};

struct MetropolisResult {
  std::vector<double> draws;
  double acceptance_rate = 0.0;  // random-walk moves after burn-in
  double independence_acceptance = 0.0;
  double step = 0.0;
  double mean = 0.0;
  double mc_se = 0.0;  // batch means
};

MetropolisResult metropolis_sample(const UnivariatePosterior& p, const MetropolisOptions& opt, std::uint64_t seed,
                                   std::uint64_t index = 0);

/// Mean of draws and its batch-means standard error.
std::pair<double, double> batch_mean_se(std::span<const double> draws, std::size_t batches);

enum class FitMethod { Quadrature, Metropolis, Conjugate, Gibbs };

std::string method_name(FitMethod m);

struct HyperPriors {
  /// Degenerate hyperpriors: tau and alpha stay at the values in the scaling rule.
  bool fixed = false;
  double tau_shape = 1.0;  // Inv-Gamma(shape, scale)
  double tau_scale = 1.0;
  double alpha_rate = 1.0;  // Exp(rate)
};

struct FitOptions {
  FitMethod method = FitMethod::Quadrature;
  std::size_t draws = 4000;
  std::size_t burn_in = 2000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool keep_draws = true;
  unsigned threads = 1;
  HyperPriors hyper;
};

struct FitDiagnostics {
  std::vector<double> acceptance;  // per coordinate (Metropolis)
  std::vector<int> panels;         // per coordinate (quadrature)
  double hyper_acceptance = 0.0;   // Gibbs (tau, alpha) move
  double tau_mean = 0.0;
  double alpha_mean = 0.0;
  std::size_t failures = 0;
};

class PosteriorSummary {
 public:
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> q05, q50, q95;
  /// Coordinate-major: draws[c * draw_count + d].
  std::vector<double> draws;
  std::size_t draw_count = 0;
  FitMethod provenance = FitMethod::Quadrature;
  FitDiagnostics diagnostics;

  std::size_t size() const noexcept { return mean.size(); }
  bool has_draws() const noexcept { return draw_count > 0; }
  std::span<const double> coordinate_draws(std::size_t c) const;
  /// Draw d across all coordinates.
  std::vector<double> draw(std::size_t d) const;
};

/// Coordinates are independent; each is seeded by (seed, coordinate) so the
/// output does not depend on evaluation order or thread count.
PosteriorSummary fit_posterior(const SequenceData& data, const PriorSpec& prior, const FitOptions& opt);

/// Gibbs sampler for the hierarchical Gaussian wavelet prior
/// sigma_j = tau 2^{-j(1/2 + alpha)}.
PosteriorSummary gibbs_hierarchical_gaussian(const SequenceData& data, const GaussianHierarchical& init,
                                             const HyperPriors& hyper, std::size_t draws, std::size_t burn_in,
                                             std::uint64_t seed, bool keep_draws = true);

/// log p(x | tau, alpha) with the coefficients integrated out.
double hierarchical_log_marginal(std::span<const double> x, const WaveletFrame& frame, double noise_precision,
                                 double tau, double alpha);

struct CredibleBand {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> center;  // synthesized posterior mean
  std::size_t retained = 0;

  double average_width() const;
};

/// Keeps the ceil(level D) draws closest to the posterior mean in L2 after
/// synthesis on the grid and returns their pointwise envelope.
CredibleBand credible_band(const PosteriorSummary& summary, const BasisDescriptor& basis, std::size_t grid,
                           double level = 0.95);
CredibleBand credible_band(std::span<const std::vector<double>> draw_functions, std::span<const double> center,
                           double level);

}  // namespace hts
