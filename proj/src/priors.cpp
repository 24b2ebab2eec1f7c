#include "hts/priors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "hts/error.hpp"
#include "hts/layout.hpp"

namespace hts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double student_log_norm(double df) {
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi);
}

std::string format_real(double v) {
  std::string s = std::to_string(v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

TailFamily::TailFamily(TailKind kind, double df) : kind_(kind), df_(df), log_norm_(0.0) {
  switch (kind) {
    case TailKind::StudentT:
      log_norm_ = student_log_norm(df);
      break;
    case TailKind::Cauchy:
      log_norm_ = -std::log(std::numbers::pi);
      break;
    case TailKind::Gaussian:
      log_norm_ = -0.5 * std::log(2.0 * std::numbers::pi);
      break;
    case TailKind::Horseshoe:
      break;
  }
}

TailFamily TailFamily::student_t(double df) {
  if (!(df > 0.0) || !std::isfinite(df)) throw InvalidParameter("Student-t degrees of freedom must be positive");
  return TailFamily(TailKind::StudentT, df);
}
TailFamily TailFamily::cauchy() { return TailFamily(TailKind::Cauchy, 1.0); }
TailFamily TailFamily::horseshoe() { return TailFamily(TailKind::Horseshoe, 0.0); }
TailFamily TailFamily::gaussian() { return TailFamily(TailKind::Gaussian, 0.0); }

std::string TailFamily::name() const {
  switch (kind_) {
    case TailKind::StudentT:
      return "student" + format_real(df_);
    case TailKind::Cauchy:
      return "cauchy";
    case TailKind::Horseshoe:
      return "horseshoe";
    case TailKind::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

double TailFamily::log_density(double x) const {
  switch (kind_) {
    case TailKind::StudentT:
      return log_norm_ - 0.5 * (df_ + 1.0) * std::log1p(x * x / df_);
    case TailKind::Cauchy:
      return log_norm_ - std::log1p(x * x);
    case TailKind::Gaussian:
      return log_norm_ - 0.5 * x * x;
    case TailKind::Horseshoe:
      return horseshoe_log_density(x, 1.0);
  }
  return -kInf;
}

double TailFamily::density(double x) const { return std::exp(log_density(x)); }

double TailFamily::tail_mass(double x) const {
  if (std::isnan(x) || x < 0.0) throw InvalidParameter("tail_mass needs x >= 0");
  switch (kind_) {
    case TailKind::StudentT:
      if (std::isinf(x)) return 0.0;
      return boost::math::cdf(boost::math::complement(boost::math::students_t(df_), x));
    case TailKind::Cauchy:
      return std::atan2(1.0, x) / std::numbers::pi;
    case TailKind::Gaussian:
      return 0.5 * std::erfc(x / std::numbers::sqrt2);
    case TailKind::Horseshoe:
      return horseshoe_tail_mass(x);
  }
  return 0.0;
}

double TailFamily::tail_quantile_bound(double mass) const {
  if (!(mass > 0.0 && mass < 0.5)) throw InvalidParameter("tail mass must lie in (0, 1/2)");
  switch (kind_) {
    case TailKind::StudentT:
      return boost::math::quantile(boost::math::complement(boost::math::students_t(df_), mass));
    case TailKind::Cauchy:
      return 1.0 / std::tan(std::numbers::pi * mass);
    case TailKind::Gaussian:
      // tail(x) <= exp(-x^2/2) / 2 for x >= 0
      return std::sqrt(2.0 * std::log(0.5 / mass));
    case TailKind::Horseshoe:
      return std::max(1.0, envelope()->c2 / mass);
  }
  return kInf;
}

std::optional<EnvelopeConstants> TailFamily::envelope() const {
  switch (kind_) {
    case TailKind::StudentT: {
      if (df_ < 1.0) return std::nullopt;  // tail mass decays like x^{-df}
      const double norm = std::exp(log_norm_);
      return EnvelopeConstants{std::max(-log_norm_, df_ + 1.0), 0.0, norm * std::pow(df_, 0.5 * (df_ - 1.0))};
    }
    case TailKind::Cauchy:
      return EnvelopeConstants{2.0, 0.0, 1.0 / std::numbers::pi};
    case TailKind::Horseshoe:
      return EnvelopeConstants{std::max(1.5 * std::log(2.0 * std::numbers::pi), 2.0), 0.0,
                               std::sqrt(2.0 / (std::numbers::pi * std::numbers::pi * std::numbers::pi))};
    case TailKind::Gaussian:
      return std::nullopt;
  }
  return std::nullopt;
}

double TailFamily::sample(RandomStream& rs) const {
  switch (kind_) {
    case TailKind::StudentT: {
      const double z = rs.normal();
      const double g = sample_gamma(rs, 0.5 * df_) / (0.5 * df_);
      return z / std::sqrt(g);
    }
    case TailKind::Cauchy:
      return rs.cauchy();
    case TailKind::Gaussian:
      return rs.normal();
    case TailKind::Horseshoe: {
      const double lambda = std::abs(rs.cauchy());
      return lambda * rs.normal();
    }
  }
  return 0.0;
}

double sample_gamma(RandomStream& rs, double shape) {
  if (!(shape > 0.0)) throw InvalidParameter("gamma shape must be positive");
  if (shape < 1.0) {
    const double g = sample_gamma(rs, shape + 1.0);
    return g * std::pow(rs.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = rs.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rs.uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

bool is_level_rule(const ScalingRule& rule) noexcept {
  return std::holds_alternative<WaveletOt>(rule) || std::holds_alternative<GaussianHierarchical>(rule);
}

double log_scaling(const ScalingRule& rule, long index) {
  if (is_level_rule(rule)) {
    if (index < -1) throw InvalidParameter("level index must be >= -1");
  } else if (index < 1) {
    throw InvalidParameter("coordinate index must be >= 1");
  }
  const double ln2 = std::numbers::ln2;
  return std::visit(overloaded{
                        [&](const OtScaling& r) {
                          const double lk = std::log(static_cast<double>(index));
                          return -std::pow(lk, 1.0 + r.nu);
                        },
                        [&](const HtScaling& r) { return -(0.5 + r.alpha) * std::log(static_cast<double>(index)); },
                        [&](const ConstantTruncated& r) {
                          return static_cast<std::size_t>(index) <= r.k_trunc ? std::log(r.tau) : -kInf;
                        },
                        [&](const WaveletOt& r) {
                          if (index <= 0) return 0.0;
                          return -std::pow(static_cast<double>(index), 1.0 + r.nu) * ln2;
                        },
                        [&](const GaussianHierarchical& r) {
                          const double j = static_cast<double>(std::max(index, 0L));
                          return std::log(r.tau) - j * (0.5 + r.alpha) * ln2;
                        },
                    },
                    rule);
}

double scaling_value(const ScalingRule& rule, long index) { return std::exp(log_scaling(rule, index)); }

double scaling_value_real(const OtScaling& rule, double k) {
  if (!(k >= 1.0)) throw InvalidParameter("OT scaling needs k >= 1");
  return std::exp(-std::pow(std::log(k), 1.0 + rule.nu));
}

bool scaling_active(const ScalingRule& rule, long index) {
  if (const auto* t = std::get_if<ConstantTruncated>(&rule)) return index >= 1 && static_cast<std::size_t>(index) <= t->k_trunc;
  return true;
}

std::string scaling_name(const ScalingRule& rule) {
  return std::visit(overloaded{
                        [](const OtScaling& r) { return "ot" + format_real(r.nu); },
                        [](const HtScaling& r) { return "ht" + format_real(r.alpha); },
                        [](const ConstantTruncated& r) { return "trunc" + std::to_string(r.k_trunc); },
                        [](const WaveletOt& r) { return "wot" + format_real(r.nu); },
                        [](const GaussianHierarchical&) { return std::string("hier"); },
                    },
                    rule);
}

namespace {

void validate_rule(const ScalingRule& rule) {
  std::visit(overloaded{
                 [](const OtScaling& r) {
                   if (!(r.nu > 0.0)) throw InvalidParameter("OT scaling needs nu > 0");
                 },
                 [](const HtScaling& r) {
                   if (!(r.alpha > 0.0)) throw InvalidParameter("HT scaling needs alpha > 0");
                 },
                 [](const ConstantTruncated& r) {
                   if (!(r.tau > 0.0)) throw InvalidParameter("truncated scaling needs tau > 0");
                   if (r.k_trunc < 1) throw InvalidParameter("truncation point must be >= 1");
                 },
                 [](const WaveletOt& r) {
                   if (!(r.nu > 0.0)) throw InvalidParameter("wavelet OT scaling needs nu > 0");
                 },
                 [](const GaussianHierarchical& r) {
                   if (!(r.tau > 0.0) || !(r.alpha > 0.0)) throw InvalidParameter("hierarchical scaling needs tau, alpha > 0");
                 },
             },
             rule);
}

}  // namespace

PriorSpec::PriorSpec(TailFamily tail, ScalingRule scaling, bool baseline)
    : tail_(tail), scaling_(scaling), baseline_(baseline) {
  validate_rule(scaling_);
  if (!tail_.heavy_tailed() && !baseline_ && !std::holds_alternative<GaussianHierarchical>(scaling_)) {
    throw InvalidParameter("tail " + tail_.name() + " is not heavy-tailed; allowed only as a flagged baseline");
  }
}

std::string PriorSpec::label() const { return tail_.name() + "-" + scaling_name(scaling_); }

long PriorSpec::index_of(std::size_t coordinate, int coarse_level) const {
  if (index_mode() == IndexMode::Double) {
    if (coordinate < (std::size_t{1} << coarse_level)) return -1;
    return flat_to_level(coordinate).j;
  }
  return static_cast<long>(coordinate) + 1;
}

std::vector<double> sample_prior(const PriorSpec& spec, std::size_t count, std::uint64_t seed, int coarse_level) {
  if (count < 1) throw InvalidParameter("sample_prior needs count >= 1");
  std::vector<double> out(count, 0.0);
  for (std::size_t c = 0; c < count; ++c) {
    if (!spec.active(c, coarse_level)) continue;
    RandomStream rs(seed, Stream::Prior, c);
    out[c] = std::exp(spec.log_scale(c, coarse_level)) * spec.tail().sample(rs);
  }
  return out;
}

}  // namespace hts
