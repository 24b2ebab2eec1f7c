#include "hts/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "hts/csv_io.hpp"
#include "hts/error.hpp"
#include "hts/signals.hpp"

namespace hts {

using nlohmann::json;

namespace {

double number_or_n(const std::string& text, double n, const char* what) {
  if (text == "n") return n;
  if (text == "1/n") return 1.0 / n;
  try {
    return parse_double(text);
  } catch (const InvalidInput&) {
    throw ConfigError(std::string(what) + ": expected a number, \"n\" or \"1/n\", got '" + text + "'");
  }
}

std::string compact(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string as_text(const json& v, const char* key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_double(v.get<double>());
  throw ConfigError(std::string(key) + " must be a number or string");
}

double as_real(const json& v, const char* key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_double(v.get<std::string>());
    } catch (const InvalidInput&) {
    }
  }
  throw ConfigError(std::string(key) + " must be a number");
}

template <class T>
T as_count(const json& v, const char* key) {
  if (!v.is_number_integer() && !(v.is_number() && std::floor(v.get<double>()) == v.get<double>()))
    throw ConfigError(std::string(key) + " must be an integer");
  if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
  const double d = v.get<double>();
  if (d < 0) throw ConfigError(std::string(key) + " must be non-negative");
  return static_cast<T>(d);
}

PriorConfig prior_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("prior entries must be objects");
  PriorConfig p;
  for (const auto& [key, v] : j.items()) {
    if (key == "label") p.label = as_text(v, "label");
    else if (key == "method") p.method = as_text(v, "method");
    else if (key == "tail") p.tail = as_text(v, "tail");
    else if (key == "df") p.df = as_real(v, "df");
    else if (key == "scaling") p.scaling = as_text(v, "scaling");
    else if (key == "nu") p.nu = as_real(v, "nu");
    else if (key == "alpha") p.alpha = as_real(v, "alpha");
    else if (key == "tau") p.tau = as_text(v, "tau");
    else if (key == "truncation") p.truncation = as_text(v, "truncation");
    else if (key == "fixed_hyper") p.fixed_hyper = v.get<bool>();
    else throw ConfigError("unknown prior field '" + key + "'");
  }
  static const char* methods[] = {"auto", "quadrature", "metropolis", "gibbs", "sureshrink"};
  bool ok = false;
  for (const char* m : methods) ok = ok || p.method == m;
  if (!ok) throw ConfigError("unknown method '" + p.method + "'");
  if (!p.is_sureshrink()) resolve_prior(p, 1000.0);
  return p;
}

TruthConfig truth_from_json(const json& j) {
  TruthConfig t;
  if (j.is_string()) {
    t.kind = j.get<std::string>();
    return t;
  }
  if (!j.is_object()) throw ConfigError("truth entries must be strings or objects");
  for (const auto& [key, v] : j.items()) {
    if (key == "kind") t.kind = as_text(v, "kind");
    else if (key == "level") t.level = as_count<int>(v, "level");
    else if (key == "snr") t.snr = as_real(v, "snr");
    else if (key == "target_norm") t.target_norm = as_real(v, "target_norm");
    else throw ConfigError("unknown truth field '" + key + "'");
  }
  return t;
}

std::vector<double> real_list(const json& v, const char* key) {
  std::vector<double> out;
  if (!v.is_array()) return {as_real(v, key)};
  for (const auto& e : v) out.push_back(as_real(e, key));
  return out;
}

PriorConfig prior(std::string tail, std::string scaling) {
  PriorConfig p;
  p.tail = std::move(tail);
  p.scaling = std::move(scaling);
  return p;
}

}  // namespace

std::string PriorConfig::name() const {
  if (!label.empty()) return label;
  if (is_sureshrink()) return "sureshrink";
  std::string t = tail == "student" ? "student" + compact(df) : tail;
  if (scaling == "ot") return t + "-ot";
  if (scaling == "ht") return t + "-ht" + compact(alpha);
  if (scaling == "truncated") return t + "-truncated";
  if (scaling == "wavelet-ot") return t + "-wavelet-ot";
  if (scaling == "hierarchical") return t + "-hierarchical";
  return t + "-" + scaling;
}

std::string TruthConfig::name() const {
  if (kind == "least-favorable") return "least-favorable-j" + std::to_string(level);
  return kind;
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (n_grid.empty()) throw ConfigError("n grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > 0) || !std::isfinite(n_grid[i])) throw ConfigError("n values must be positive and finite");
    if (i > 0 && !(n_grid[i] > n_grid[i - 1])) throw ConfigError("n grid must be strictly increasing");
  }
  if (p_primes.empty()) throw ConfigError("p' list is empty");
  for (double p : p_primes)
    if (!(p >= 1.0)) throw ConfigError("p' values must lie in [1, inf]");
  if (truths.empty()) throw ConfigError("no truth configured");
  if (priors.empty()) throw ConfigError("no prior configured");
  if (paired && truths.size() != n_grid.size()) throw ConfigError("paired mode needs one n per truth");
  if (basis != "cosine" && basis != "sine" && basis != "wavelet")
    throw ConfigError("basis must be cosine, sine or wavelet");
  if (bands != "none" && bands != "first" && bands != "all") throw ConfigError("bands must be none, first or all");
  if (draws < 2) throw ConfigError("draws must be at least 2");
  if (grid < 2) throw ConfigError("grid must be at least 2");
  if (parallel < 1) throw ConfigError("parallel must be at least 1");
  if (!(tol > 0)) throw ConfigError("tol must be positive");
  if (basis == "wavelet") {
    if (levels < 1 || levels > 24) throw ConfigError("levels must lie in 1..24");
    if (coarse_level < 0 || coarse_level >= levels) throw ConfigError("coarse_level must lie in [0, levels)");
    try {
      Filter::from_name(filter);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  } else if (truncation < 1) {
    throw ConfigError("truncation must be at least 1");
  }
  std::vector<std::string> names;
  for (const auto& p : priors) {
    if (p.is_sureshrink() && basis != "wavelet") throw ConfigError("sureshrink needs the wavelet basis");
    const std::string nm = p.name();
    for (const auto& other : names)
      if (other == nm) throw ConfigError("duplicate prior label '" + nm + "'");
    names.push_back(nm);
  }
  for (const auto& t : truths) {
    const bool wavelet_truth = t.kind != "sobolev-cos" && t.kind != "sobolev-sine";
    if (wavelet_truth != (basis == "wavelet")) throw ConfigError("truth '" + t.kind + "' does not match the basis");
    if (t.kind == "least-favorable" && (t.level < coarse_level || t.level >= levels))
      throw ConfigError("least-favorable level must be a detail level of the frame");
  }
}

BasisDescriptor ExperimentConfig::make_basis() const {
  if (basis == "cosine") return BasisDescriptor::cosine();
  if (basis == "sine") return BasisDescriptor::sine();
  return BasisDescriptor::wavelet(WaveletFrame(Filter::from_name(filter), levels, coarse_level));
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"sobolev-4.1", "undersmoothing-appA", "inhomogeneous-4.2",
                                            "sparse-besov-4.3", "custom"};
  return ids;
}

ExperimentConfig preset_config(const std::string& id) {
  ExperimentConfig c;
  c.id = id;
  if (id == "custom") return c;
  if (id == "sobolev-4.1") {
    c.basis = "cosine";
    c.truths = {TruthConfig{"sobolev-cos"}};
    PriorConfig student = prior("student", "ot");
    PriorConfig trunc = prior("horseshoe", "truncated");
    trunc.tau = "1/n";
    trunc.truncation = "n";
    c.priors = {student, prior("cauchy", "ot"), prior("horseshoe", "ot"), trunc};
    c.n_grid = {1e3, 1e4, 1e5};
    return c;
  }
  if (id == "undersmoothing-appA") {
    c.basis = "sine";
    c.truths = {TruthConfig{"sobolev-sine"}};
    for (double a : {0.75, 1.25, 1.75, 2.75}) {
      PriorConfig p = prior("student", "ht");
      p.alpha = a;
      c.priors.push_back(p);
    }
    c.n_grid = {2e2, 2e3, 2e4};
    return c;
  }
  if (id == "inhomogeneous-4.2") {
    c.basis = "wavelet";
    c.levels = 11;
    c.coarse_level = 5;
    for (const char* k : {"blocks", "bumps", "doppler", "heavisine"}) c.truths.push_back(TruthConfig{k});
    PriorConfig sure;
    sure.method = "sureshrink";
    c.priors = {prior("cauchy", "wavelet-ot"), prior("gaussian", "hierarchical"), sure};
    c.n_grid = {1.0};
    c.p_primes = {1, 2, 3, 4, 6, std::numeric_limits<double>::infinity()};
    c.replications = 100;
    c.contraction = true;
    c.bands = "none";
    return c;
  }
  if (id == "sparse-besov-4.3") {
    c.basis = "wavelet";
    c.levels = 11;
    c.coarse_level = 2;
    for (int i = 1; i <= 4; ++i) {
      TruthConfig t{"least-favorable"};
      t.level = 2 * i;
      c.truths.push_back(t);
      c.n_grid.push_back(std::pow(10.0, i + 1));
    }
    c.paired = true;
    PriorConfig sure;
    sure.method = "sureshrink";
    c.priors = {prior("cauchy", "wavelet-ot"), sure};
    c.p_primes = {1, 2, 3, 4, 6, std::numeric_limits<double>::infinity()};
    c.replications = 100;
    c.bands = "none";
    return c;
  }
  throw ConfigError("unknown experiment '" + id + "'");
}

ExperimentConfig parse_config(const std::string& json_text, const ExperimentConfig& base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c = base;
  if (j.contains("experiment")) {
    const std::string id = as_text(j["experiment"], "experiment");
    if (id != base.id) c = preset_config(id);
  }
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "experiment") continue;
      if (key == "basis") c.basis = as_text(v, "basis");
      else if (key == "filter") c.filter = as_text(v, "filter");
      else if (key == "levels") c.levels = as_count<int>(v, "levels");
      else if (key == "coarse_level") c.coarse_level = as_count<int>(v, "coarse_level");
      else if (key == "truncation") c.truncation = as_count<std::size_t>(v, "truncation");
      else if (key == "truths") {
        c.truths.clear();
        if (!v.is_array()) throw ConfigError("truths must be an array");
        for (const auto& e : v) c.truths.push_back(truth_from_json(e));
      } else if (key == "priors") {
        c.priors.clear();
        if (!v.is_array()) throw ConfigError("priors must be an array");
        for (const auto& e : v) c.priors.push_back(prior_from_json(e));
      } else if (key == "n") c.n_grid = real_list(v, "n");
      else if (key == "paired") c.paired = v.get<bool>();
      else if (key == "p_prime") c.p_primes = real_list(v, "p_prime");
      else if (key == "replications") c.replications = as_count<std::size_t>(v, "replications");
      else if (key == "seed") c.seed = as_count<std::uint64_t>(v, "seed");
      else if (key == "out") c.output_dir = as_text(v, "out");
      else if (key == "parallel") c.parallel = as_count<unsigned>(v, "parallel");
      else if (key == "draws") c.draws = as_count<std::size_t>(v, "draws");
      else if (key == "burn_in") c.burn_in = as_count<std::size_t>(v, "burn_in");
      else if (key == "contraction") c.contraction = v.get<bool>();
      else if (key == "bands") c.bands = as_text(v, "bands");
      else if (key == "grid") c.grid = as_count<std::size_t>(v, "grid");
      else if (key == "tol") c.tol = as_real(v, "tol");
      else throw ConfigError("unknown config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

PriorConfig parse_prior(const std::string& json_text) {
  try {
    return prior_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed prior: ") + e.what());
  }
}

PriorSpec resolve_prior(const PriorConfig& cfg, double n) {
  if (cfg.is_sureshrink()) throw ConfigError("sureshrink is not a prior");
  try {
    TailFamily tail = cfg.tail == "cauchy"      ? TailFamily::cauchy()
                      : cfg.tail == "student"   ? TailFamily::student_t(cfg.df)
                      : cfg.tail == "horseshoe" ? TailFamily::horseshoe()
                      : cfg.tail == "gaussian"  ? TailFamily::gaussian()
                                                : throw ConfigError("unknown tail '" + cfg.tail + "'");
    ScalingRule rule = OtScaling{cfg.nu};
    const double tau = number_or_n(cfg.tau, n, "tau");
    if (cfg.scaling == "ot") {
      rule = OtScaling{cfg.nu};
    } else if (cfg.scaling == "ht") {
      rule = HtScaling{cfg.alpha};
    } else if (cfg.scaling == "truncated") {
      const double k = std::floor(number_or_n(cfg.truncation, n, "truncation"));
      if (!(k >= 1)) throw ConfigError("truncation must be at least 1");
      rule = ConstantTruncated{tau, static_cast<std::size_t>(k)};
    } else if (cfg.scaling == "wavelet-ot") {
      rule = WaveletOt{cfg.nu};
    } else if (cfg.scaling == "hierarchical") {
      rule = GaussianHierarchical{tau, cfg.alpha};
    } else {
      throw ConfigError("unknown scaling '" + cfg.scaling + "'");
    }
    return PriorSpec(tail, rule);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

FitMethod resolve_method(const PriorConfig& cfg, const PriorSpec& spec) {
  const bool hier = std::holds_alternative<GaussianHierarchical>(spec.scaling());
  if (cfg.method == "gibbs" || (cfg.method == "auto" && hier)) return hier && cfg.fixed_hyper ? FitMethod::Conjugate : FitMethod::Gibbs;
  if (cfg.method == "metropolis") return FitMethod::Metropolis;
  return hier ? FitMethod::Conjugate : FitMethod::Quadrature;
}

TrueSignal make_truth(const TruthConfig& t, const ExperimentConfig& cfg, double n) {
  if (t.kind == "sobolev-cos") return truth_sobolev_cos(cfg.truncation);
  if (t.kind == "sobolev-sine") return truth_sobolev_sine(cfg.truncation);
  const BasisDescriptor basis = cfg.make_basis();
  if (t.kind == "least-favorable") {
    StickBreakingSpec s{t.level, t.target_norm, cfg.seed};
    return truth_least_favorable(s, basis.frame());
  }
  try {
    return truth_dj_quartet(dj_signal_from_name(t.kind), basis.frame(), t.snr, n);
  } catch (const InvalidParameter&) {
    throw ConfigError("unknown truth '" + t.kind + "'");
  }
}

}  // namespace hts
