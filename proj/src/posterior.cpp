#include "hts/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "hts/error.hpp"

namespace hts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ95 = 1.6448536269514722;

double log_cosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// Break points in u for theta = sigma sinh(u).
std::vector<double> quadrature_breaks(const UnivariatePosterior& p, double ax, double sigma, double tol) {
  const double sd = 1.0 / std::sqrt(p.noise_precision);
  const double prior_edge = std::asinh(std::min(p.tail.tail_quantile_bound(std::min(1e-3 * tol, 1e-6)), 1e300));
  const double lik_lo = std::asinh((ax - 10.0 * sd) / sigma);
  const double lik_hi = std::asinh((ax + 10.0 * sd) / sigma);
  const double lo = std::max(std::min(-prior_edge, lik_lo), -700.0);
  const double hi = std::min(std::max(prior_edge, lik_hi), 700.0);

  std::vector<double> b = {lo, hi, 0.0, -prior_edge, prior_edge};
  for (int k = -10; k <= 10; ++k) b.push_back(std::asinh((ax + k * sd) / sigma));
  if (p.tail.kind() == TailKind::Gaussian) {
    // the light tail pulls the mode out of the likelihood window
    const double v = sigma * sigma, w = p.noise_precision * v;
    const double c = ax * w / (1.0 + w), s = std::sqrt(v / (1.0 + w));
    for (int k = -12; k <= 12; ++k) b.push_back(std::asinh((c + k * s) / sigma));
  }
  for (double u = 1.0; u < 700.0; u *= 2.0) {
    b.push_back(u);
    b.push_back(-u);
  }
  if (p.tail.has_pole()) {
    for (int m = 1; m <= 40; ++m) {
      const double u = std::asinh(std::ldexp(1.0, -m));
      b.push_back(u);
      b.push_back(-u);
    }
  }
  std::erase_if(b, [&](double u) { return !(u >= lo && u <= hi); });
  return b;
}

}  // namespace

double UnivariatePosterior::log_target(double theta) const {
  const double sigma = std::exp(log_sigma);
  const double r = x - theta;
  return -0.5 * noise_precision * r * r + tail.log_density(theta / sigma) - log_sigma;
}

QuadratureResult quadrature_mean_var(const UnivariatePosterior& p, double tol, bool keep_masses) {
  if (!std::isfinite(p.x)) throw InvalidInput("observation is not finite");
  if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");
  if (!(p.noise_precision > 0.0) || !std::isfinite(p.noise_precision)) {
    throw InvalidParameter("noise precision must be positive");
  }
  const double n = p.noise_precision;
  const double log_lik_norm = 0.5 * std::log(n / (2.0 * std::numbers::pi));
  QuadratureResult out;
  if (p.log_sigma == -kInf) {
    // point mass at zero
    out.log_normalizer = log_lik_norm - 0.5 * n * p.x * p.x;
    if (keep_masses) out.masses = {{0.0, 1.0}};
    return out;
  }
  const double sigma = std::exp(p.log_sigma);
  const double ax = std::abs(p.x);
  const bool symmetric = p.x == 0.0;

  auto f = [&](double u) {
    const double s = std::sinh(u);
    const double theta = sigma * s;
    const double r = ax - theta;
    return quad::LogNode{theta, -0.5 * n * r * r + p.tail.log_density(s) + log_cosh(u)};
  };

  std::vector<double> breaks = quadrature_breaks(p, ax, sigma, tol);
  if (symmetric) std::erase_if(breaks, [](double u) { return u < 0.0; });

  quad::AdaptiveOptions opt;
  opt.rtol = tol;
  opt.atol = 1e-5 * tol;
  const quad::LogMomentResult r = quad::integrate_log_moments(f, breaks, opt);

  out.panels = r.panels;
  if (symmetric) {
    // integrand is even: the half-line gives the second moment, mass doubles
    out.mean = 0.0;
    out.variance = r.variance + r.mean * r.mean;
    out.log_normalizer = r.log_mass + std::numbers::ln2 + log_lik_norm;
    out.mean_error = 0.0;
    if (keep_masses) {
      out.masses.reserve(2 * r.masses.size());
      for (auto it = r.masses.rbegin(); it != r.masses.rend(); ++it) out.masses.push_back({-it->theta, 0.5 * it->mass});
      for (const auto& m : r.masses) out.masses.push_back({m.theta, 0.5 * m.mass});
    }
    return out;
  }
  const double sign = p.x < 0.0 ? -1.0 : 1.0;
  out.mean = sign * r.mean;
  out.variance = r.variance;
  out.log_normalizer = r.log_mass + log_lik_norm;
  out.mean_error = r.mean_error;
  if (keep_masses) {
    out.masses = r.masses;
    if (sign < 0.0) {
      std::reverse(out.masses.begin(), out.masses.end());
      for (auto& m : out.masses) m.theta = -m.theta;
    }
  }
  return out;
}

double posterior_quantile(const QuadratureResult& r, double prob) {
  if (r.masses.empty()) throw StateError("quadrature result kept no masses");
  if (!(prob > 0.0 && prob < 1.0)) throw InvalidParameter("probability must lie in (0, 1)");
  return quad::mass_quantile(r.masses, prob);
}

std::string method_name(FitMethod m) {
  switch (m) {
    case FitMethod::Quadrature:
      return "quadrature";
    case FitMethod::Metropolis:
      return "metropolis";
    case FitMethod::Conjugate:
      return "conjugate";
    case FitMethod::Gibbs:
      return "gibbs";
  }
  return "unknown";
}

std::span<const double> PosteriorSummary::coordinate_draws(std::size_t c) const {
  if (!has_draws()) throw StateError("summary stores no draws");
  return std::span<const double>(draws).subspan(c * draw_count, draw_count);
}

std::vector<double> PosteriorSummary::draw(std::size_t d) const {
  if (!has_draws()) throw StateError("summary stores no draws");
  if (d >= draw_count) throw InvalidParameter("draw index out of range");
  std::vector<double> out(size());
  for (std::size_t c = 0; c < size(); ++c) out[c] = draws[c * draw_count + d];
  return out;
}

namespace {

double empirical_quantile(std::vector<double>& sorted, double prob) {
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

void write_sample_moments(PosteriorSummary& s, std::size_t c, std::span<const double> d) {
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  s.mean[c] = mean;
  s.variance[c] = d.size() > 1 ? ss / static_cast<double>(d.size() - 1) : 0.0;
  std::vector<double> sorted(d.begin(), d.end());
  std::sort(sorted.begin(), sorted.end());
  s.q05[c] = empirical_quantile(sorted, 0.05);
  s.q50[c] = empirical_quantile(sorted, 0.5);
  s.q95[c] = empirical_quantile(sorted, 0.95);
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t c = 0; c < count; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t end = std::min(count, (t + 1) * chunk);
        for (std::size_t c = t * chunk; c < end; ++c) fn(c);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

PosteriorSummary fit_posterior(const SequenceData& data, const PriorSpec& prior, const FitOptions& opt) {
  const bool wavelet = data.basis.is_wavelet();
  if (wavelet != (prior.index_mode() == IndexMode::Double)) {
    throw InvalidInput("prior index mode does not match the data basis");
  }
  if (data.observations.size() != data.truncation) throw InvalidInput("observation count differs from truncation");
  if (wavelet && data.observations.size() != data.basis.frame().size()) throw InvalidInput("wavelet data length differs from its frame");

  if (opt.method == FitMethod::Gibbs) {
    const auto* rule = std::get_if<GaussianHierarchical>(&prior.scaling());
    if (rule == nullptr || prior.tail().kind() != TailKind::Gaussian) {
      throw InvalidParameter("Gibbs path needs a Gaussian tail with hierarchical scaling");
    }
    return gibbs_hierarchical_gaussian(data, *rule, opt.hyper, opt.draws, opt.burn_in, opt.seed, opt.keep_draws);
  }
  if (opt.method == FitMethod::Conjugate && prior.tail().kind() != TailKind::Gaussian) {
    throw InvalidParameter("conjugate path needs a Gaussian tail");
  }

  const std::size_t N = data.observations.size();
  const int coarse = wavelet ? data.basis.frame().coarse_level() : 0;
  const double n = data.noise_precision;
  const bool sampled = opt.method == FitMethod::Metropolis || opt.method == FitMethod::Conjugate;
  const bool store = sampled && opt.keep_draws;

  PosteriorSummary s;
  s.provenance = opt.method;
  s.mean.assign(N, 0.0);
  s.variance.assign(N, 0.0);
  s.q05.assign(N, 0.0);
  s.q50.assign(N, 0.0);
  s.q95.assign(N, 0.0);
  if (store) {
    s.draw_count = opt.draws;
    s.draws.assign(N * opt.draws, 0.0);
  }
  if (opt.method == FitMethod::Metropolis) s.diagnostics.acceptance.assign(N, 0.0);
  if (opt.method == FitMethod::Quadrature) s.diagnostics.panels.assign(N, 0);

  parallel_for(N, opt.threads, [&](std::size_t c) {
    if (!prior.active(c, coarse)) return;
    const double log_sigma = prior.log_scale(c, coarse);
    if (log_sigma == -kInf) return;
    const UnivariatePosterior p{data.observations[c], n, log_sigma, prior.tail()};
    switch (opt.method) {
      case FitMethod::Quadrature: {
        const QuadratureResult r = quadrature_mean_var(p, opt.tol, true);
        s.mean[c] = r.mean;
        s.variance[c] = r.variance;
        s.q05[c] = posterior_quantile(r, 0.05);
        s.q50[c] = posterior_quantile(r, 0.5);
        s.q95[c] = posterior_quantile(r, 0.95);
        s.diagnostics.panels[c] = r.panels;
        break;
      }
      case FitMethod::Metropolis: {
        MetropolisOptions mo;
        mo.draws = opt.draws;
        mo.burn_in = opt.burn_in;
        const MetropolisResult r = metropolis_sample(p, mo, opt.seed, c);
        write_sample_moments(s, c, r.draws);
        s.diagnostics.acceptance[c] = r.acceptance_rate;
        if (store) std::copy(r.draws.begin(), r.draws.end(), s.draws.begin() + static_cast<std::ptrdiff_t>(c * opt.draws));
        break;
      }
      case FitMethod::Conjugate: {
        const double v = std::exp(2.0 * log_sigma);
        const double shrink = n * v / (1.0 + n * v);
        const double mean = p.x * shrink;
        const double var = v / (1.0 + n * v);
        const double sd = std::sqrt(var);
        s.mean[c] = mean;
        s.variance[c] = var;
        s.q05[c] = mean - kZ95 * sd;
        s.q50[c] = mean;
        s.q95[c] = mean + kZ95 * sd;
        if (store) {
          RandomStream rs(opt.seed, Stream::Sampler, c);
          for (std::size_t d = 0; d < opt.draws; ++d) s.draws[c * opt.draws + d] = mean + sd * rs.normal();
        }
        break;
      }
      case FitMethod::Gibbs:
        break;
    }
  });
  return s;
}

}  // namespace hts
