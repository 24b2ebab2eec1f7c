#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hts/error.hpp"
#include "hts/posterior.hpp"
#include "hts/rng.hpp"

namespace hts {

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

std::pair<double, double> batch_mean_se(std::span<const double> draws, std::size_t batches) {
  if (draws.empty()) throw InvalidParameter("no draws");
  double mean = 0.0;
  for (double v : draws) mean += v;
  mean /= static_cast<double>(draws.size());
  batches = std::min(batches, draws.size());
  if (batches < 2) return {mean, std::numeric_limits<double>::infinity()};
  const std::size_t len = draws.size() / batches;
  double ss = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double m = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) m += draws[i];
    m /= static_cast<double>(len);
    ss += (m - mean) * (m - mean);
  }
  const double var_batch = ss / static_cast<double>(batches - 1);
  return {mean, std::sqrt(var_batch / static_cast<double>(batches))};
}

MetropolisResult metropolis_sample(const UnivariatePosterior& p, const MetropolisOptions& opt, std::uint64_t seed,
                                   std::uint64_t index) {
  if (opt.draws < 1) throw InvalidParameter("need at least one draw");
  if (!std::isfinite(p.x)) throw InvalidInput("observation is not finite");
  const double n = p.noise_precision;
  const double sigma = std::exp(p.log_sigma);
  const double sd_lik = 1.0 / std::sqrt(n);
  const double log_half = -std::numbers::ln2;
  const double log_lik_norm = 0.5 * std::log(n / (2.0 * std::numbers::pi));

  auto log_prior = [&](double theta) { return p.tail.log_density(theta / sigma) - p.log_sigma; };
  auto log_lik = [&](double theta) {
    const double r = p.x - theta;
    return -0.5 * n * r * r;
  };
  // equal mixture of the prior and N(x, 1/n)
  auto log_proposal = [&](double theta, double lp) {
    return log_add(log_half + lp, log_half + log_lik_norm + log_lik(theta));
  };

  RandomStream rs(seed, Stream::Sampler, index);
  double theta = rs.uniform(-2.0, 2.0);
  double lp = log_prior(theta);
  double ll = log_lik(theta);
  double log_step = std::log(2.4 * std::min(sd_lik, 2.0 * sigma));

  MetropolisResult out;
  out.draws.reserve(opt.draws);
  std::size_t rw_accepted = 0, ind_accepted = 0;
  const std::size_t total = opt.burn_in + opt.draws;
  for (std::size_t it = 0; it < total; ++it) {
    const bool burning = it < opt.burn_in;

    const double prop = theta + std::exp(log_step) * rs.normal();
    const double u_rw = rs.uniform();
    double accept_prob = 0.0;
    if (prop != 0.0) {
      const double lp_new = log_prior(prop);
      const double ll_new = log_lik(prop);
      const double log_ratio = (lp_new + ll_new) - (lp + ll);
      accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
      if (u_rw < accept_prob) {
        theta = prop;
        lp = lp_new;
        ll = ll_new;
        if (!burning) ++rw_accepted;
      }
    }
    if (burning) {
      const double gain = 2.0 / std::sqrt(static_cast<double>(it) + 1.0);
      log_step += gain * (accept_prob - opt.target_acceptance);
    }

    if (opt.independence_moves) {
      const double pick = rs.uniform();
      const double cand = pick < 0.5 ? sigma * p.tail.sample(rs) : p.x + sd_lik * rs.normal();
      const double u_ind = rs.uniform();
      if (cand != 0.0 && std::isfinite(cand)) {
        const double lp_new = log_prior(cand);
        const double ll_new = log_lik(cand);
        const double log_ratio =
            (lp_new + ll_new - log_proposal(cand, lp_new)) - (lp + ll - log_proposal(theta, lp));
        if (std::log(u_ind) < log_ratio) {
          theta = cand;
          lp = lp_new;
          ll = ll_new;
          if (!burning) ++ind_accepted;
        }
      }
    }
    if (!burning) out.draws.push_back(theta);
  }
  out.acceptance_rate = static_cast<double>(rw_accepted) / static_cast<double>(opt.draws);
  out.independence_acceptance = static_cast<double>(ind_accepted) / static_cast<double>(opt.draws);
  out.step = std::exp(log_step);
  const auto [mean, se] = batch_mean_se(out.draws, opt.batches);
  out.mean = mean;
  out.mc_se = se;
  return out;
}

}  // namespace hts
