#include <algorithm>
#include <cmath>
#include <numbers>

#include "hts/error.hpp"
#include "hts/layout.hpp"
#include "hts/posterior.hpp"
#include "hts/rng.hpp"

namespace hts {

namespace {

struct LevelStat {
  int level;  // -1 for the scaling block
  double count;
  double sum_sq;
};

std::vector<LevelStat> level_stats(std::span<const double> x, const WaveletFrame& frame) {
  std::vector<LevelStat> stats;
  stats.push_back({-1, 0.0, 0.0});
  for (int j = frame.coarse_level(); j < frame.levels(); ++j) stats.push_back({j, 0.0, 0.0});
  for (std::size_t c = 0; c < x.size(); ++c) {
    const int j = frame.level_of(c);
    LevelStat& s = j < 0 ? stats.front() : stats[static_cast<std::size_t>(j - frame.coarse_level() + 1)];
    s.count += 1.0;
    s.sum_sq += x[c] * x[c];
  }
  return stats;
}

inline double level_log_sigma(int j, double log_tau, double alpha) {
  return log_tau - std::max(j, 0) * (0.5 + alpha) * std::numbers::ln2;
}

double marginal_from_stats(const std::vector<LevelStat>& stats, double n, double log_tau, double alpha) {
  double total = 0.0;
  for (const LevelStat& s : stats) {
    const double v = 1.0 / n + std::exp(2.0 * level_log_sigma(s.level, log_tau, alpha));
    total += -0.5 * s.count * std::log(2.0 * std::numbers::pi * v) - 0.5 * s.sum_sq / v;
  }
  return total;
}

}  // namespace

double hierarchical_log_marginal(std::span<const double> x, const WaveletFrame& frame, double noise_precision,
                                 double tau, double alpha) {
  if (x.size() != frame.size()) throw ShapeError("coefficients do not match the frame");
  if (!(tau > 0.0) || !(alpha > 0.0)) throw InvalidParameter("tau and alpha must be positive");
  return marginal_from_stats(level_stats(x, frame), noise_precision, std::log(tau), alpha);
}

PosteriorSummary gibbs_hierarchical_gaussian(const SequenceData& data, const GaussianHierarchical& init,
                                             const HyperPriors& hyper, std::size_t draws, std::size_t burn_in,
                                             std::uint64_t seed, bool keep_draws) {
  if (!data.basis.is_wavelet()) throw InvalidInput("hierarchical Gibbs sampler needs double-index data");
  if (draws < 1) throw InvalidParameter("need at least one draw");
  const WaveletFrame& frame = data.basis.frame();
  const std::span<const double> x = data.observations;
  if (x.size() != frame.size()) throw InvalidInput("wavelet data length differs from its frame");
  const double n = data.noise_precision;
  const auto stats = level_stats(x, frame);

  // log posterior of (log tau, log alpha), Jacobians included
  auto log_post = [&](double lt, double la) {
    const double tau = std::exp(lt), alpha = std::exp(la);
    const double prior_tau = -hyper.tau_shape * lt - hyper.tau_scale / tau;
    const double prior_alpha = -hyper.alpha_rate * alpha + la;
    return marginal_from_stats(stats, n, lt, alpha) + prior_tau + prior_alpha;
  };

  double lt = std::log(init.tau), la = std::log(init.alpha);
  double cur = hyper.fixed ? 0.0 : log_post(lt, la);
  double log_step = std::log(0.5);
  RandomStream hyper_rs(seed, Stream::Hyper, 0);

  const std::size_t N = x.size();
  std::vector<int> level(N);
  for (std::size_t c = 0; c < N; ++c) level[c] = frame.level_of(c);

  PosteriorSummary s;
  s.provenance = FitMethod::Gibbs;
  s.mean.assign(N, 0.0);
  s.variance.assign(N, 0.0);
  s.q05.assign(N, 0.0);
  s.q50.assign(N, 0.0);
  s.q95.assign(N, 0.0);
  if (keep_draws) {
    s.draw_count = draws;
    s.draws.assign(N * draws, 0.0);
  }
  std::vector<double> mean_sq(N, 0.0), cond_var(N, 0.0);
  std::size_t accepted = 0;
  double tau_sum = 0.0, alpha_sum = 0.0;

  const int top = frame.levels();
  std::vector<double> shrink(static_cast<std::size_t>(top + 1)), post_sd(static_cast<std::size_t>(top + 1));

  for (std::size_t it = 0; it < burn_in + draws; ++it) {
    const bool burning = it < burn_in;
    if (!hyper.fixed) {
      const double step = std::exp(log_step);
      const double lt_new = lt + step * hyper_rs.normal();
      const double la_new = la + step * hyper_rs.normal();
      const double next = log_post(lt_new, la_new);
      const double ratio = next - cur;
      const double prob = ratio >= 0.0 ? 1.0 : std::exp(ratio);
      if (hyper_rs.uniform() < prob) {
        lt = lt_new;
        la = la_new;
        cur = next;
        if (!burning) ++accepted;
      }
      if (burning) log_step += (1.0 / std::sqrt(static_cast<double>(it) + 1.0)) * (prob - 0.3);
    }
    if (burning) continue;

    const std::size_t d = it - burn_in;
    const double alpha = std::exp(la);
    tau_sum += std::exp(lt);
    alpha_sum += alpha;
    // slot 0 holds the scaling block, slot j + 1 level j
    for (int j = -1; j < top; ++j) {
      const double v = std::exp(2.0 * level_log_sigma(j, lt, alpha));
      shrink[static_cast<std::size_t>(j + 1)] = n * v / (1.0 + n * v);
      post_sd[static_cast<std::size_t>(j + 1)] = std::sqrt(v / (1.0 + n * v));
    }
    RandomStream rs(seed, Stream::Sampler, d);
    for (std::size_t c = 0; c < N; ++c) {
      const std::size_t slot = static_cast<std::size_t>(level[c] + 1);
      const double m = x[c] * shrink[slot];
      const double sd = post_sd[slot];
      s.mean[c] += m;
      mean_sq[c] += m * m;
      cond_var[c] += sd * sd;
      if (keep_draws) s.draws[c * draws + d] = m + sd * rs.normal();
    }
  }

  const double D = static_cast<double>(draws);
  for (std::size_t c = 0; c < N; ++c) {
    s.mean[c] /= D;
    s.variance[c] = cond_var[c] / D + std::max(0.0, mean_sq[c] / D - s.mean[c] * s.mean[c]);
    if (keep_draws) {
      std::vector<double> sorted(s.draws.begin() + static_cast<std::ptrdiff_t>(c * draws),
                                 s.draws.begin() + static_cast<std::ptrdiff_t>((c + 1) * draws));
      std::sort(sorted.begin(), sorted.end());
      auto q = [&](double prob) {
        const double pos = prob * (D - 1.0);
        const std::size_t i = static_cast<std::size_t>(pos);
        if (i + 1 >= sorted.size()) return sorted.back();
        return sorted[i] + (pos - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
      };
      s.q05[c] = q(0.05);
      s.q50[c] = q(0.5);
      s.q95[c] = q(0.95);
    } else {
      const double sd = std::sqrt(s.variance[c]);
      s.q05[c] = s.mean[c] - 1.6448536269514722 * sd;
      s.q50[c] = s.mean[c];
      s.q95[c] = s.mean[c] + 1.6448536269514722 * sd;
    }
  }
  s.diagnostics.hyper_acceptance = hyper.fixed ? 1.0 : static_cast<double>(accepted) / D;
  s.diagnostics.tau_mean = tau_sum / D;
  s.diagnostics.alpha_mean = alpha_sum / D;
  return s;
}

}  // namespace hts
