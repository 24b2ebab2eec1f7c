#include "hts/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "hts/csv_io.hpp"
#include "hts/error.hpp"
#include "hts/rng.hpp"
#include "hts/svg_plot.hpp"
#include "hts/thresholding.hpp"

namespace hts {

namespace {

constexpr const char* kMeanEstimate = "mean-estimate";
constexpr const char* kContraction = "contraction";

const char* kPalette[] = {"#1f4e9c", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#7f8c8d"};

template <class Fn>
void run_parallel(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Cell {
  std::size_t truth;
  std::size_t n_index;
};

// Per replication and prior: error per (type, p').
struct PriorOutcome {
  std::vector<double> mean_errors;
  std::vector<double> contraction;
  double band_width = -1.0;
  CredibleBand band;
  bool has_band = false;
};

std::string file_token(double n) { return format_double(n); }

std::string band_file(const ExperimentConfig& cfg, const std::string& signal, const std::string& prior, double n) {
  std::string base = "bands_";
  if (cfg.truths.size() > 1 && !cfg.paired) base += signal + "_";
  return base + prior + "_" + file_token(n);
}

void write_file(const std::filesystem::path& path, const std::string& body, std::vector<std::string>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StateError("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw StateError("write failed for '" + path.string() + "'");
  files.push_back(path.string());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files, const ProgressFn& progress) {
  cfg.validate();
  const BasisDescriptor basis = cfg.make_basis();
  const std::size_t K = basis.is_wavelet() ? basis.frame().size() : cfg.truncation;
  const ErrorEvaluator eval(basis, K, cfg.grid);
  const std::size_t P = cfg.p_primes.size();
  const std::size_t R = cfg.replications;
  const bool bands_on = cfg.bands != "none";

  std::vector<Cell> cells;
  if (cfg.paired) {
    for (std::size_t i = 0; i < cfg.truths.size(); ++i) cells.push_back({i, i});
  } else {
    for (std::size_t t = 0; t < cfg.truths.size(); ++t)
      for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) cells.push_back({t, i});
  }

  // Grid values used by band files; for wavelets the dyadic sample points.
  std::vector<double> grid_t;
  if (basis.is_wavelet()) {
    const std::size_t N = basis.frame().size();
    for (std::size_t i = 0; i < N; ++i) grid_t.push_back(static_cast<double>(i + 1) / static_cast<double>(N));
  } else {
    grid_t = uniform_grid(cfg.grid);
  }

  ExperimentResult result;
  std::vector<std::pair<std::string, std::string>> band_outputs;

  for (const Cell& cell : cells) {
    const TruthConfig& tc = cfg.truths[cell.truth];
    const double n = cfg.n_grid[cell.n_index];
    const std::string signal = cfg.paired ? tc.kind : tc.name();
    const TrueSignal truth = make_truth(tc, cfg, n);
    truth.validate();
    if (progress) progress(signal + " n=" + format_double(n));

    std::vector<std::optional<PriorSpec>> specs;
    for (const auto& pc : cfg.priors) {
      if (pc.is_sureshrink()) specs.emplace_back();
      else specs.emplace_back(resolve_prior(pc, n));
    }

    std::vector<std::vector<PriorOutcome>> outcomes(R, std::vector<PriorOutcome>(cfg.priors.size()));
    run_parallel(R, cfg.parallel, [&](std::size_t r) {
      const std::uint64_t seed = derive_seed(cfg.seed, r);
      const SequenceData data = simulate(truth, n, K, seed);
      for (std::size_t pi = 0; pi < cfg.priors.size(); ++pi) {
        const PriorConfig& pc = cfg.priors[pi];
        PriorOutcome& out = outcomes[r][pi];
        if (pc.is_sureshrink()) {
          const auto est = hybrid_sureshrink(data.observations, basis.frame(), n);
          out.mean_errors = eval.lp_errors(est, truth.coefficients, cfg.p_primes);
          continue;
        }
        const PriorSpec& spec = *specs[pi];
        const bool want_band = bands_on && (cfg.bands == "all" || r == 0);
        const bool want_draws = cfg.contraction || want_band;
        FitOptions fo;
        fo.method = resolve_method(pc, spec);
        fo.draws = cfg.draws;
        fo.burn_in = cfg.burn_in;
        fo.seed = derive_seed(seed, 1000 + pi);
        fo.tol = cfg.tol;
        fo.hyper.fixed = pc.fixed_hyper;
        const bool sampled_fit = fo.method == FitMethod::Gibbs || fo.method == FitMethod::Conjugate;
        fo.keep_draws = sampled_fit && want_draws;
        const PosteriorSummary fit = fit_posterior(data, spec, fo);
        out.mean_errors = eval.lp_errors(fit.mean, truth.coefficients, cfg.p_primes);
        if (!want_draws) continue;

        PosteriorSummary sampled;
        const PosteriorSummary* draws = &fit;
        if (!sampled_fit) {
          FitOptions mo = fo;
          mo.method = FitMethod::Metropolis;
          mo.keep_draws = true;
          sampled = fit_posterior(data, spec, mo);
          draws = &sampled;
        }
        if (cfg.contraction) {
          out.contraction = contraction_errors(*draws, truth.coefficients, cfg.p_primes, eval);
          // Jensen: the posterior-averaged L2 loss dominates the loss of the draw average.
          std::vector<double> avg(draws->size(), 0.0);
          for (std::size_t c = 0; c < draws->size(); ++c) {
            double s = 0.0;
            for (double v : draws->coordinate_draws(c)) s += v;
            avg[c] = s / static_cast<double>(draws->draw_count);
          }
          const double of_mean = eval.lp_error(avg, truth.coefficients, 2.0);
          const double contr = contraction_error(*draws, truth.coefficients, 2.0, eval);
          if (contr < of_mean * (1.0 - 1e-10)) throw StateError("contraction error below the error of the draw mean");
        }
        if (want_band) {
          out.band = credible_band(*draws, basis, cfg.grid);
          out.band_width = out.band.average_width();
          out.has_band = r == 0;
          if (!out.has_band) out.band = CredibleBand{};
        }
      }
    });

    for (std::size_t pi = 0; pi < cfg.priors.size(); ++pi) {
      const std::string prior = cfg.priors[pi].name();
      auto emit = [&](const char* type, auto member) {
        for (std::size_t k = 0; k < P; ++k) {
          std::vector<double> vals;
          for (std::size_t r = 0; r < R; ++r) {
            const auto& v = outcomes[r][pi].*member;
            if (!v.empty()) vals.push_back(v[k]);
          }
          if (vals.empty()) return;
          const ReplicationStats st = replication_stats(vals);
          result.errors.push_back({cfg.id, signal, prior, n, cfg.p_primes[k], type, st.mean, st.se, st.count});
        }
      };
      emit(kMeanEstimate, &PriorOutcome::mean_errors);
      emit(kContraction, &PriorOutcome::contraction);

      std::vector<double> widths;
      for (std::size_t r = 0; r < R; ++r)
        if (outcomes[r][pi].band_width >= 0) widths.push_back(outcomes[r][pi].band_width);
      if (!widths.empty()) {
        const ReplicationStats st = replication_stats(widths);
        result.band_widths.push_back({signal, prior, n, st.mean, st.se, st.count});
      }

      const PriorOutcome& first = outcomes[0][pi];
      if (first.has_band) {
        const std::vector<double> f0 = eval.function_values(truth.coefficients);
        std::ostringstream csv;
        csv << "t,truth,mean,lower,upper\n";
        for (std::size_t i = 0; i < first.band.center.size(); ++i)
          csv << format_double(grid_t[i]) << "," << format_double(f0[i]) << "," << format_double(first.band.center[i])
              << "," << format_double(first.band.lower[i]) << "," << format_double(first.band.upper[i]) << "\n";
        const std::string stem = band_file(cfg, signal, prior, n);
        band_outputs.emplace_back(stem + ".csv", csv.str());

        LineChart chart;
        chart.title = prior + ", n = " + format_double(n);
        chart.x_label = "t";
        chart.band_x = grid_t;
        chart.band_lower = first.band.lower;
        chart.band_upper = first.band.upper;
        chart.series.push_back({"truth", grid_t, f0, "#000000"});
        chart.series.push_back({"posterior mean", grid_t, first.band.center, "#1f4e9c"});
        band_outputs.emplace_back("plot_" + stem + ".svg", chart.str());
      }
    }
  }

  result.slopes = fit_slopes(result.errors);

  if (write_files) {
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw StateError("cannot create output directory '" + dir.string() + "': " + ec.message());
    std::ostringstream e, s;
    write_errors_csv(e, result.errors);
    write_file(dir / "errors.csv", e.str(), result.files);
    write_slopes_csv(s, result.slopes);
    write_file(dir / "slopes.csv", s.str(), result.files);
    if (!result.band_widths.empty()) {
      std::ostringstream b;
      write_band_widths_csv(b, result.band_widths);
      write_file(dir / "band_widths.csv", b.str(), result.files);
    }
    for (const auto& [name, body] : band_outputs) write_file(dir / name, body, result.files);
    for (const auto& [name, body] : error_plots(result.errors)) write_file(dir / name, body, result.files);
  }
  return result;
}

std::vector<SlopeRecord> fit_slopes(const std::vector<ErrorRecord>& errors) {
  using Key = std::tuple<std::string, std::string, std::string, double, std::string>;
  std::map<Key, std::vector<std::pair<double, double>>> groups;
  std::vector<Key> order;
  for (const auto& e : errors) {
    const Key key{e.experiment, e.signal, e.prior, e.p_prime, e.error_type};
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.emplace_back(e.n, e.value);
  }
  std::vector<SlopeRecord> out;
  for (const Key& key : order) {
    auto pts = groups[key];
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 2 || pts.front().first == pts.back().first) continue;
    std::vector<double> ns, vs;
    bool positive = true;
    for (const auto& [n, v] : pts) {
      ns.push_back(n);
      vs.push_back(v);
      positive = positive && v > 0;
    }
    if (!positive) continue;
    SlopeRecord r;
    std::tie(r.experiment, r.signal, r.prior, r.p_prime, r.error_type) = key;
    r.fit = slope_fit(ns, vs);
    r.points = pts.size();
    out.push_back(r);
  }
  return out;
}

void write_errors_csv(std::ostream& out, const std::vector<ErrorRecord>& errors) {
  out << "experiment,signal,prior,n,p_prime,error_type,value,se,replications\n";
  for (const auto& e : errors)
    out << e.experiment << "," << e.signal << "," << e.prior << "," << format_double(e.n) << ","
        << format_double(e.p_prime) << "," << e.error_type << "," << format_double(e.value) << ","
        << format_double(e.se) << "," << e.replications << "\n";
}

std::vector<ErrorRecord> read_errors_csv(std::istream& in) {
  std::vector<ErrorRecord> out;
  std::string line;
  if (!std::getline(in, line) || line.rfind("experiment,signal,prior,n,p_prime", 0) != 0)
    throw InvalidInput("not an errors.csv table");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 9) throw InvalidInput("errors.csv line " + std::to_string(lineno) + " has " + std::to_string(c.size()) + " fields");
    ErrorRecord e;
    e.experiment = c[0];
    e.signal = c[1];
    e.prior = c[2];
    e.n = parse_double(c[3]);
    e.p_prime = parse_double(c[4]);
    e.error_type = c[5];
    e.value = parse_double(c[6]);
    e.se = parse_double(c[7]);
    e.replications = static_cast<std::size_t>(parse_double(c[8]));
    if (!(e.value >= 0)) throw InvalidInput("negative error value at line " + std::to_string(lineno));
    out.push_back(e);
  }
  return out;
}

void write_slopes_csv(std::ostream& out, const std::vector<SlopeRecord>& slopes) {
  out << "experiment,signal,prior,p_prime,error_type,slope,intercept,residual,points\n";
  for (const auto& s : slopes)
    out << s.experiment << "," << s.signal << "," << s.prior << "," << format_double(s.p_prime) << ","
        << s.error_type << "," << format_double(s.fit.slope) << "," << format_double(s.fit.intercept) << ","
        << format_double(s.fit.residual) << "," << s.points << "\n";
}

void write_band_widths_csv(std::ostream& out, const std::vector<BandWidthRecord>& widths) {
  out << "signal,prior,n,width,se,replications\n";
  for (const auto& w : widths)
    out << w.signal << "," << w.prior << "," << format_double(w.n) << "," << format_double(w.width) << ","
        << format_double(w.se) << "," << w.replications << "\n";
}

std::vector<std::pair<std::string, std::string>> error_plots(const std::vector<ErrorRecord>& errors) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> signals, types;
  std::vector<double> ns;
  for (const auto& e : errors) {
    if (std::find(signals.begin(), signals.end(), e.signal) == signals.end()) signals.push_back(e.signal);
    if (std::find(types.begin(), types.end(), e.error_type) == types.end()) types.push_back(e.error_type);
    if (std::find(ns.begin(), ns.end(), e.n) == ns.end()) ns.push_back(e.n);
  }
  for (const auto& signal : signals) {
    for (const auto& type : types) {
      std::map<std::string, PlotSeries> by_series;
      std::vector<std::string> order;
      const bool over_n = ns.size() > 1;
      for (const auto& e : errors) {
        if (e.signal != signal || e.error_type != type || !(e.value > 0)) continue;
        if (!over_n && !std::isfinite(e.p_prime)) continue;
        const std::string name =
            over_n ? e.prior + " p'=" + format_double(e.p_prime) : e.prior;
        auto [it, fresh] = by_series.try_emplace(name);
        if (fresh) {
          order.push_back(name);
          it->second.name = name;
          it->second.color = kPalette[(order.size() - 1) % std::size(kPalette)];
          it->second.markers = true;
        }
        it->second.x.push_back(over_n ? std::log10(e.n) : e.p_prime);
        it->second.y.push_back(std::log10(e.value));
      }
      if (order.empty()) continue;
      LineChart chart;
      chart.title = signal + " (" + type + ")";
      chart.x_label = over_n ? "log10 n" : "p'";
      chart.y_label = "log10 error";
      for (const auto& name : order) chart.series.push_back(by_series[name]);
      out.emplace_back("plot_" + signal + "_" + type + ".svg", chart.str());
    }
  }
  return out;
}

}  // namespace hts
