#include "hts/metrics.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "hts/error.hpp"
#include "hts/simd/kernels.hpp"

namespace hts {

double grid_norm(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw InvalidParameter("p must be >= 1");
  if (values.empty()) return 0.0;
  if (std::isinf(p)) return simd::max_abs(values);
  const double m = static_cast<double>(values.size());
  if (p == 1.0) return simd::sum_abs(values) / m;
  if (p == 2.0) return std::sqrt(simd::sum_sq(values) / m);
  const double top = simd::max_abs(values);
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / top, p);
  return top * std::pow(s / m, 1.0 / p);
}

ErrorEvaluator::ErrorEvaluator(const BasisDescriptor& basis, std::size_t coefficient_count, std::size_t grid)
    : basis_(basis), count_(coefficient_count), grid_(grid) {
  if (basis_.is_wavelet()) {
    grid_ = basis_.frame().size();
    if (count_ != grid_) throw ShapeError("wavelet coefficient count differs from the frame");
  } else {
    matrix_.emplace(basis_, count_, grid_);
  }
}

std::vector<double> ErrorEvaluator::function_values(std::span<const double> coefficients) const {
  if (coefficients.size() != count_) throw ShapeError("coefficient count differs from the evaluator");
  return matrix_ ? matrix_->synthesize(coefficients) : basis_.frame().synthesize(coefficients);
}

std::vector<double> ErrorEvaluator::lp_errors(std::span<const double> estimate, std::span<const double> truth,
                                              std::span<const double> p_primes) const {
  if (estimate.size() != truth.size() || estimate.size() != count_) throw ShapeError("estimate and truth shapes differ");
  std::vector<double> diff(count_);
  for (std::size_t c = 0; c < count_; ++c) diff[c] = estimate[c] - truth[c];
  std::vector<double> out(p_primes.size());
  std::vector<double> values;
  for (std::size_t i = 0; i < p_primes.size(); ++i) {
    const double p = p_primes[i];
    if (!(p >= 1.0)) throw InvalidParameter("p' must be >= 1");
    if (p == 2.0) {
      const double norm = std::sqrt(simd::sum_sq(diff));
      // wavelet functions live on the sample scale
      out[i] = basis_.is_wavelet() ? norm / std::sqrt(static_cast<double>(count_)) : norm;
      continue;
    }
    if (values.empty()) values = function_values(diff);
    out[i] = grid_norm(values, p);
  }
  return out;
}

double ErrorEvaluator::lp_error(std::span<const double> estimate, std::span<const double> truth, double p_prime) const {
  const double p[] = {p_prime};
  return lp_errors(estimate, truth, p).front();
}

double lp_error(std::span<const double> estimate, std::span<const double> truth, double p_prime,
                const BasisDescriptor& basis, std::size_t grid) {
  if (estimate.size() != truth.size()) throw ShapeError("estimate and truth shapes differ");
  return ErrorEvaluator(basis, truth.size(), grid).lp_error(estimate, truth, p_prime);
}

std::vector<double> contraction_errors(const PosteriorSummary& summary, std::span<const double> truth,
                                       std::span<const double> p_primes, const ErrorEvaluator& eval) {
  if (!summary.has_draws()) throw StateError("contraction error needs posterior draws");
  std::vector<double> acc(p_primes.size(), 0.0);
  for (std::size_t d = 0; d < summary.draw_count; ++d) {
    const auto e = eval.lp_errors(summary.draw(d), truth, p_primes);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += e[i];
  }
  for (double& v : acc) v /= static_cast<double>(summary.draw_count);
  return acc;
}

double contraction_error(const PosteriorSummary& summary, std::span<const double> truth, double p_prime,
                         const ErrorEvaluator& eval) {
  const double p[] = {p_prime};
  return contraction_errors(summary, truth, p, eval).front();
}

SlopeFit slope_fit(std::span<const double> n, std::span<const double> errors) {
  if (n.size() != errors.size()) throw ShapeError("n grid and errors differ in length");
  if (std::set<double>(n.begin(), n.end()).size() < 2) throw InvalidParameter("slope fit needs two distinct n");
  const double m = static_cast<double>(n.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(errors[i] > 0.0)) throw InvalidParameter("slope fit needs positive n and errors");
    sx += std::log(n[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double dx = std::log(n[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  SlopeFit fit{sxy / sxx, 0.0, 0.0};
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double r = std::log(errors[i]) - (fit.intercept + fit.slope * std::log(n[i]));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  return fit;
}

ReplicationStats replication_stats(std::span<const double> values) {
  if (values.empty()) throw InvalidParameter("no replications");
  const double R = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= R;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (R - 1.0)) : 0.0;
  return {mean, sd, sd / std::sqrt(R), values.size()};
}

}  // namespace hts
