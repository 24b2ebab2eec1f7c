// hts: command-line front end for simulation, fitting, rates, test signals
// and the replicated experiments.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"

#include "hts/config.hpp"
#include "hts/csv_io.hpp"
#include "hts/error.hpp"
#include "hts/experiment.hpp"
#include "hts/signals.hpp"
#include "hts/spaces.hpp"

namespace {

using namespace hts;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

double parse_real_arg(const std::string& s) {
  try {
    return parse_double(s);
  } catch (const InvalidInput&) {
    throw ConfigError("not a number: '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_csv_line(s))
    if (!item.empty()) out.push_back(parse_real_arg(item));
  return out;
}

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file.open(path, std::ios::binary);
    if (!file) throw StateError("cannot write '" + path + "'");
    stream = &file;
  }
};

BasisDescriptor basis_from_meta(const CsvMeta& meta) {
  auto get = [&](const char* key) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw InvalidInput(std::string("data file lacks '") + key + "' metadata");
    return it->second;
  };
  const std::string name = get("basis");
  if (name == "cosine") return BasisDescriptor::cosine();
  if (name == "sine") return BasisDescriptor::sine();
  if (name.rfind("wavelet-", 0) == 0) {
    const int levels = static_cast<int>(parse_double(get("levels")));
    const int coarse = static_cast<int>(parse_double(get("coarse_level")));
    return BasisDescriptor::wavelet(WaveletFrame(Filter::from_name(name.substr(8)), levels, coarse));
  }
  throw InvalidInput("unknown basis '" + name + "'");
}

struct CommonFlags {
  std::string config;
  std::string experiment = "custom";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::size_t replications = 0;
  unsigned parallel = 0;
};

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig cfg = preset_config(f.experiment);
  if (!f.config.empty()) cfg = load_config(f.config, cfg);
  if (f.seed_set) cfg.seed = f.seed;
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.replications > 0) cfg.replications = f.replications;
  if (f.parallel > 0) cfg.parallel = f.parallel;
  return cfg;
}

int cmd_simulate(const CommonFlags& f, const std::string& truth_name, double n, std::size_t K,
                 const std::string& basis, int levels, int coarse, int level) {
  ExperimentConfig cfg = build_config(f);
  if (!basis.empty()) cfg.basis = basis;
  if (levels > 0) cfg.levels = levels;
  if (coarse >= 0) cfg.coarse_level = coarse;
  if (K > 0) cfg.truncation = K;
  if (!truth_name.empty()) {
    TruthConfig t{truth_name};
    if (level > 0) t.level = level;
    cfg.truths = {t};
    const bool wavelet_truth = truth_name != "sobolev-cos" && truth_name != "sobolev-sine";
    if (basis.empty()) cfg.basis = wavelet_truth ? "wavelet" : truth_name == "sobolev-sine" ? "sine" : "cosine";
  }
  if (cfg.truths.empty()) throw ConfigError("simulate needs --truth or a config with truths");
  if (n <= 0) {
    if (cfg.n_grid.empty()) throw ConfigError("simulate needs --n");
    n = cfg.n_grid.front();
  }
  cfg.n_grid = {n};
  cfg.paired = false;
  if (cfg.priors.empty()) cfg.priors.push_back(PriorConfig{});
  cfg.validate();
  const TrueSignal truth = make_truth(cfg.truths.front(), cfg, n);
  const std::size_t count = truth.basis.is_wavelet() ? truth.basis.frame().size() : cfg.truncation;
  const SequenceData data = simulate(truth, n, count, cfg.seed);
  std::string target = f.out;
  if (!target.empty() && std::filesystem::is_directory(target)) target = (std::filesystem::path(target) / "data.csv").string();
  Output out(target);
  write_sequence_csv(*out.stream, data);
  return kExitOk;
}

int cmd_fit(const CommonFlags& f, const std::string& data_path, const std::string& prior_json,
            const std::string& method, std::size_t draws, std::size_t burn_in, bool save_draws, double tol) {
  std::ifstream in(data_path);
  if (!in) throw ConfigError("cannot read data file '" + data_path + "'");
  const CoefficientTable table = read_coefficients_csv(in);
  const BasisDescriptor basis = basis_from_meta(table.meta);
  const double n = parse_double(table.meta.at("n"));
  SequenceData data{table.values, n, table.values.size(), basis, 0};

  PriorConfig pc = prior_json.empty() ? PriorConfig{} : parse_prior(prior_json);
  if (prior_json.empty() && basis.is_wavelet()) pc.scaling = "wavelet-ot";
  if (!method.empty()) pc.method = method;
  if (pc.is_sureshrink()) throw ConfigError("fit takes a prior; sureshrink runs inside experiments");
  const PriorSpec spec = resolve_prior(pc, n);
  FitOptions fo;
  fo.method = resolve_method(pc, spec);
  fo.draws = draws;
  fo.burn_in = burn_in;
  fo.seed = f.seed;
  fo.tol = tol;
  fo.keep_draws = save_draws;
  fo.hyper.fixed = pc.fixed_hyper;
  fo.threads = std::max(1u, f.parallel);
  const PosteriorSummary s = fit_posterior(data, spec, fo);

  const std::filesystem::path dir(f.out.empty() ? "." : f.out);
  std::filesystem::create_directories(dir);
  CsvMeta meta = table.meta;
  meta["prior"] = pc.name();
  meta["fit_seed"] = std::to_string(f.seed);
  {
    std::ofstream o(dir / "summary.csv", std::ios::binary);
    write_summary_csv(o, s, basis, meta);
  }
  {
    std::ofstream o(dir / "diagnostics.json", std::ios::binary);
    write_diagnostics_json(o, s, meta);
  }
  if (save_draws && s.has_draws()) {
    std::ofstream o(dir / "draws.csv", std::ios::binary);
    write_draws_csv(o, s, basis);
  }
  std::cerr << "fit " << pc.name() << " (" << method_name(s.provenance) << ") on " << s.size() << " coordinates -> "
            << dir.string() << "\n";
  return kExitOk;
}

int cmd_rates(const std::string& s_list, const std::string& p_list, const std::string& q_list,
              const std::string& pp_list) {
  std::cout << "s,p,q,p_prime,eta,s_prime,r,zone\n";
  for (double s : parse_list(s_list))
    for (double p : parse_list(p_list))
      for (double q : parse_list(q_list))
        for (double pp : parse_list(pp_list)) {
          try {
            const RateSpec r(s, p, q, pp);
            std::cout << format_double(s) << "," << format_double(p) << "," << format_double(q) << ","
                      << format_double(pp) << "," << format_double(r.eta()) << "," << format_double(r.s_prime())
                      << "," << format_double(r.rate()) << "," << zone_name(r.zone()) << "\n";
          } catch (const DomainError& e) {
            std::cerr << "skipping (" << s << ", " << p << ", " << q << ", " << pp << "): " << e.what() << "\n";
          }
        }
  return kExitOk;
}

int cmd_signals(const CommonFlags& f, const std::string& name, int levels, int coarse, double snr, int level,
                std::size_t K, bool coefficients) {
  std::string target = f.out;
  if (!target.empty() && std::filesystem::is_directory(target))
    target = (std::filesystem::path(target) / ("signal_" + name + ".csv")).string();
  Output out(target);
  std::ostream& os = *out.stream;
  if (name == "sobolev-cos" || name == "sobolev-sine") {
    const TrueSignal t = name == "sobolev-cos" ? truth_sobolev_cos(K) : truth_sobolev_sine(K);
    if (coefficients) {
      write_coefficients_csv(os, t.coefficients, t.basis, {{"signal", name}, {"basis", t.basis.name()}});
      return kExitOk;
    }
    const auto grid = uniform_grid(201);
    const auto values = synthesize(t.coefficients, t.basis, grid.size());
    os << "t,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) os << format_double(grid[i]) << "," << format_double(values[i]) << "\n";
    return kExitOk;
  }
  const WaveletFrame frame(Filter::from_name("symmlet8"), levels, coarse);
  TrueSignal t = name == "least-favorable"
                     ? truth_least_favorable(StickBreakingSpec{level, 20.0, f.seed}, frame)
                     : truth_dj_quartet(dj_signal_from_name(name), frame, snr, 1.0);
  if (coefficients) {
    write_coefficients_csv(os, t.coefficients, t.basis,
                           {{"signal", name},
                            {"basis", t.basis.name()},
                            {"levels", std::to_string(levels)},
                            {"coarse_level", std::to_string(coarse)}});
    return kExitOk;
  }
  const auto values = frame.synthesize(t.coefficients);
  os << "t,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << format_double(static_cast<double>(i + 1) / static_cast<double>(values.size())) << ","
       << format_double(values[i]) << "\n";
  return kExitOk;
}

int cmd_experiment(CommonFlags f, const std::string& id, bool quiet) {
  bool known = false;
  for (const auto& k : experiment_ids()) known = known || k == id;
  if (!known) throw ConfigError("unknown experiment '" + id + "'");
  f.experiment = id;
  const ExperimentConfig cfg = build_config(f);
  ProgressFn progress;
  if (!quiet) progress = [](const std::string& msg) { std::cerr << "  " << msg << "\n"; };
  const ExperimentResult r = run_experiment(cfg, true, progress);
  for (const auto& s : r.slopes)
    std::cout << s.signal << " " << s.prior << " p'=" << format_double(s.p_prime) << " " << s.error_type
              << " slope=" << format_double(s.fit.slope) << "\n";
  std::cerr << "wrote " << r.files.size() << " files to " << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_report(const CommonFlags& f) {
  const std::filesystem::path dir(f.out.empty() ? "out" : f.out);
  std::ifstream in(dir / "errors.csv");
  if (!in) throw ConfigError("no errors.csv in '" + dir.string() + "'");
  const auto errors = read_errors_csv(in);
  const auto slopes = fit_slopes(errors);
  std::cout << "signal,prior,n,p_prime,error_type,value,se\n";
  for (const auto& e : errors)
    std::cout << e.signal << "," << e.prior << "," << format_double(e.n) << "," << format_double(e.p_prime) << ","
              << e.error_type << "," << format_double(e.value) << "," << format_double(e.se) << "\n";
  if (!slopes.empty()) {
    std::cout << "\nsignal,prior,p_prime,error_type,slope,residual\n";
    for (const auto& s : slopes)
      std::cout << s.signal << "," << s.prior << "," << format_double(s.p_prime) << "," << s.error_type << ","
                << format_double(s.fit.slope) << "," << format_double(s.fit.residual) << "\n";
  }
  std::ofstream so(dir / "slopes.csv", std::ios::binary);
  write_slopes_csv(so, slopes);
  for (const auto& [name, body] : error_plots(errors)) {
    std::ofstream o(dir / name, std::ios::binary);
    o << body;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed series priors in the Gaussian sequence model"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--seed", flags.seed, "base seed")->each([&](const std::string&) { flags.seed_set = true; });
    sub->add_option("--out", flags.out, "output file or directory");
    sub->add_option("--replications", flags.replications, "replication count");
    sub->add_option("--parallel", flags.parallel, "worker threads");
  };

  auto* sim = app.add_subcommand("simulate", "simulate sequence-model data");
  add_common(sim);
  std::string truth;
  double n = 0.0;
  std::size_t K = 0;
  std::string basis;
  int levels = 0, coarse = -1, level = 0;
  sim->add_option("--experiment", flags.experiment, "preset supplying defaults");
  sim->add_option("--truth", truth, "sobolev-cos, sobolev-sine, blocks, bumps, doppler, heavisine, least-favorable");
  sim->add_option("--n", n, "noise precision");
  sim->add_option("--K", K, "truncation");
  sim->add_option("--basis", basis, "cosine, sine or wavelet");
  sim->add_option("--levels", levels, "wavelet levels J (2^J coefficients)");
  sim->add_option("--coarse-level", coarse, "wavelet coarse level");
  sim->add_option("--level", level, "least-favorable level");

  auto* fit = app.add_subcommand("fit", "fit a series prior to simulated data");
  add_common(fit);
  std::string data_path, prior_json, method;
  std::size_t draws = 4000, burn_in = 2000;
  bool save_draws = false;
  double tol = 1e-9;
  fit->add_option("--data", data_path, "coefficient CSV from simulate")->required();
  fit->add_option("--prior", prior_json, R"(JSON prior, e.g. {"tail":"cauchy","scaling":"ot","nu":0.5})");
  fit->add_option("--method", method, "auto, quadrature, metropolis or gibbs");
  fit->add_option("--draws", draws, "posterior draws kept");
  fit->add_option("--burn-in", burn_in, "burn-in iterations");
  fit->add_flag("--save-draws", save_draws, "write draws.csv");
  fit->add_option("--tol", tol, "quadrature tolerance");

  auto* rates = app.add_subcommand("rates", "minimax rate exponents");
  std::string s_list = "1.5", p_list = "1", q_list = "inf", pp_list = "1,2,3,4,6";
  rates->add_option("--s", s_list, "comma-separated smoothness values");
  rates->add_option("--p", p_list, "comma-separated p values");
  rates->add_option("--q", q_list, "comma-separated q values");
  rates->add_option("--pprime", pp_list, "comma-separated loss exponents");

  auto* sig = app.add_subcommand("signals", "emit a test signal");
  add_common(sig);
  std::string sig_name = "blocks";
  int sig_levels = 11, sig_coarse = 5, sig_level = 2;
  double snr = 7.0;
  std::size_t sig_K = 200;
  bool coefficients = false;
  sig->add_option("--name", sig_name, "signal name");
  sig->add_option("--levels", sig_levels, "wavelet levels");
  sig->add_option("--coarse-level", sig_coarse, "wavelet coarse level");
  sig->add_option("--level", sig_level, "least-favorable level");
  sig->add_option("--snr", snr, "signal-to-noise ratio");
  sig->add_option("--K", sig_K, "truncation for series truths");
  sig->add_flag("--coefficients", coefficients, "emit coefficients instead of function values");

  auto* exp = app.add_subcommand("experiment", "run a replicated experiment");
  add_common(exp);
  std::string exp_id;
  bool quiet = false;
  exp->add_option("id", exp_id, "sobolev-4.1, undersmoothing-appA, inhomogeneous-4.2, sparse-besov-4.3, custom")
      ->required();
  exp->add_flag("--quiet", quiet, "no progress output");

  auto* rep = app.add_subcommand("report", "summarize an experiment output directory");
  add_common(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(flags, truth, n, K, basis, levels, coarse, level);
    if (*fit) return cmd_fit(flags, data_path, prior_json, method, draws, burn_in, save_draws, tol);
    if (*rates) return cmd_rates(s_list, p_list, q_list, pp_list);
    if (*sig) return cmd_signals(flags, sig_name, sig_levels, sig_coarse, snr, sig_level, sig_K, coefficients);
    if (*exp) return cmd_experiment(flags, exp_id, quiet);
    if (*rep) return cmd_report(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (achieved " << e.achieved() << ", requested "
              << e.requested() << ")\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
