#include "hts/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hts/error.hpp"
#include "hts/layout.hpp"
#include "hts/wavelets.hpp"

namespace hts {

namespace {

inline double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

std::string zone_name(Zone zone) {
  switch (zone) {
    case Zone::Regular:
      return "regular";
    case Zone::Sparse:
      return "sparse";
    case Zone::Boundary:
      return "boundary";
  }
  return "unknown";
}

bool admissible(double s, double p, double p_prime) noexcept {
  return s > std::max(0.0, inv(p) - inv(std::max(p_prime, 2.0)));
}

RateSpec::RateSpec(double s, double p, double q, double p_prime) : s_(s), p_(p), q_(q), pp_(p_prime) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("smoothness s must be positive and finite");
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("p and q must lie in [1, inf]");
  if (!(p_prime >= 1.0) || std::isinf(p_prime)) throw DomainError("loss index p' must lie in [1, inf)");
  if (!admissible(s, p, p_prime)) {
    throw DomainError("inadmissible indices: need s > (1/p - 1/max(p', 2))_+");
  }
}

double RateSpec::eta() const noexcept {
  if (std::isinf(p_)) return std::numeric_limits<double>::infinity();
  return s_ * p_ - 0.5 * (pp_ - p_);
}

double RateSpec::s_prime() const noexcept { return s_ - inv(p_) + inv(pp_); }

Zone RateSpec::zone() const noexcept {
  const double e = eta();
  if (std::isinf(e)) return Zone::Regular;
  const double scale = std::max(1.0, std::abs(s_ * p_));
  if (std::abs(e) <= 1e-12 * scale) return Zone::Boundary;
  return e > 0.0 ? Zone::Regular : Zone::Sparse;
}

double regular_rate(double s) noexcept { return s / (1.0 + 2.0 * s); }

double sparse_rate(double s, double p, double p_prime) noexcept {
  return (s - inv(p) + inv(p_prime)) / (1.0 + 2.0 * (s - inv(p)));
}

double RateSpec::rate() const noexcept { return zone() == Zone::Regular ? regular_rate(s_) : sparse_rate(s_, p_, pp_); }

double rate_exponent(const RateSpec& spec) noexcept { return spec.rate(); }

double besov_norm(std::span<const double> coefficients, double s, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("p and q must lie in [1, inf]");
  if (coefficients.empty()) return 0.0;
  const int top = max_level(coefficients.size());
  const double expo = s + 0.5 - inv(p);
  double acc = 0.0;
  for (int j = -1; j <= top; ++j) {
    const double weight = j < 0 ? 1.0 : std::exp2(j * expo);
    const double term = weight * level_norm(coefficients, j, p);
    if (std::isinf(q)) acc = std::max(acc, term);
    else acc += std::pow(term, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double sobolev_norm(std::span<const double> coefficients, double beta) {
  double acc = 0.0;
  for (std::size_t c = 0; c < coefficients.size(); ++c) {
    const double k = static_cast<double>(c + 1);
    acc += std::pow(k, 2.0 * beta) * coefficients[c] * coefficients[c];
  }
  return std::sqrt(acc);
}

bool embedding_check(double s, double p, double q, double s_prime, double p_prime, double q_prime) {
  if (p_prime > p && close(s_prime - inv(p_prime), s - inv(p)) && q_prime == q) return true;
  if (p_prime == p) {
    if (s_prime < s && !close(s_prime, s)) return true;
    if (close(s_prime, s) && q_prime >= q) return true;
  }
  return false;
}

}  // namespace hts
