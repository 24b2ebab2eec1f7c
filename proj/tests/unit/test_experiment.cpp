#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hts/error.hpp"
#include "hts/experiment.hpp"

using namespace hts;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hts_test_experiment_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg = preset_config("custom");
  cfg.basis = "cosine";
  cfg.truncation = 40;
  cfg.truths = {TruthConfig{"sobolev-cos"}};
  PriorConfig cauchy;
  PriorConfig ht;
  ht.scaling = "ht";
  ht.alpha = 2.0;
  cfg.priors = {cauchy, ht};
  cfg.n_grid = {1e3, 1e5};
  cfg.p_primes = {2.0, 4.0};
  cfg.replications = 4;
  cfg.bands = "none";
  cfg.grid = 101;
  return cfg;
}

}  // namespace

TEST_CASE("small experiment is deterministic and degrades monotonically") {
  auto cfg = small_config();
  cfg.output_dir = scratch("a").string();
  const auto a = run_experiment(cfg);
  REQUIRE(a.errors.size() == 2 * 2 * 2);
  for (const auto& e : a.errors) {
    CHECK(e.replications == 4);
    CHECK(e.error_type == "mean-estimate");
    CHECK(e.value > 0);
    CHECK(e.se >= 0);
  }
  for (const auto& lo : a.errors)
    for (const auto& hi : a.errors)
      if (lo.prior == hi.prior && lo.p_prime == hi.p_prime && lo.n == 1e3 && hi.n == 1e5) CHECK(hi.value < lo.value);
  CHECK(a.slopes.size() == 4);
  for (const auto& s : a.slopes) {
    CHECK(s.fit.slope < 0);
    CHECK(s.points == 2);
  }

  // same config, other directory, more threads: identical bytes
  auto again = cfg;
  again.output_dir = scratch("b").string();
  again.parallel = 3;
  run_experiment(again);
  const auto ea = slurp(std::filesystem::path(cfg.output_dir) / "errors.csv");
  CHECK(!ea.empty());
  CHECK(ea == slurp(std::filesystem::path(again.output_dir) / "errors.csv"));
  CHECK(slurp(std::filesystem::path(cfg.output_dir) / "slopes.csv") ==
        slurp(std::filesystem::path(again.output_dir) / "slopes.csv"));
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "plot_sobolev-cos_mean-estimate.svg"));
  CHECK(!std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "band_widths.csv"));

  auto other = cfg;
  other.seed += 1;
  const auto b = run_experiment(other, false);
  CHECK(b.files.empty());
  CHECK(b.errors.front().value != a.errors.front().value);
}

TEST_CASE("errors table round trip and slopes") {
  std::vector<ErrorRecord> errors;
  for (double n : {1e2, 1e3, 1e4})
    for (double pp : {2.0, std::numeric_limits<double>::infinity()})
      errors.push_back({"x", "sig", "p", n, pp, "mean-estimate", 3 * std::pow(n, -0.4), 0.01, 5});
  errors.push_back({"x", "sig", "q", 1e3, 2.0, "contraction", 0.2, 0.0, 5});
  std::stringstream ss;
  write_errors_csv(ss, errors);
  const auto back = read_errors_csv(ss);
  REQUIRE(back.size() == errors.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].prior == errors[i].prior);
    CHECK(back[i].n == errors[i].n);
    CHECK(back[i].p_prime == errors[i].p_prime);
    CHECK(back[i].value == errors[i].value);
    CHECK(back[i].replications == 5);
  }
  const auto slopes = fit_slopes(back);
  // the single-n contraction group has no slope
  REQUIRE(slopes.size() == 2);
  for (const auto& s : slopes) CHECK(s.fit.slope == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(std::isinf(slopes[1].p_prime));

  const auto plots = error_plots(back);
  REQUIRE(plots.size() == 2);
  CHECK(plots[0].first == "plot_sig_mean-estimate.svg");
  CHECK(plots[0].second.find("p p'=inf") != std::string::npos);

  std::stringstream bad("experiment,signal,prior,n,p_prime,error_type,value,se,replications\nx,s,p,1,2,m,0.1\n");
  CHECK_THROWS_AS(read_errors_csv(bad), InvalidInput);
  std::stringstream wrong("a,b\n");
  CHECK_THROWS_AS(read_errors_csv(wrong), InvalidInput);
}

TEST_CASE("bands and contraction outputs") {
  auto cfg = small_config();
  cfg.truncation = 12;
  cfg.priors.resize(1);
  cfg.n_grid = {1e3};
  cfg.replications = 2;
  cfg.draws = 400;
  cfg.burn_in = 200;
  cfg.contraction = true;
  cfg.bands = "first";
  cfg.grid = 51;
  cfg.output_dir = scratch("bands").string();
  const auto r = run_experiment(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  const std::string stem = "bands_" + cfg.priors[0].name() + "_1000";
  REQUIRE(std::filesystem::exists(dir / (stem + ".csv")));
  CHECK(std::filesystem::exists(dir / ("plot_" + stem + ".svg")));
  CHECK(std::filesystem::exists(dir / "band_widths.csv"));
  std::ifstream in(dir / (stem + ".csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,truth,mean,lower,upper");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 51);
  REQUIRE(r.band_widths.size() == 1);
  CHECK(r.band_widths[0].replications == 1);
  CHECK(r.band_widths[0].width > 0);

  std::size_t contraction = 0;
  for (const auto& e : r.errors)
    if (e.error_type == "contraction") {
      ++contraction;
      CHECK(e.replications == 2);
    }
  CHECK(contraction == 2);
  // posterior-averaged L2 loss is at least the loss of the mean
  CHECK(r.errors[2].value >= r.errors[0].value * (1 - 1e-9));
}

TEST_CASE("sureshrink rows in a wavelet experiment") {
  ExperimentConfig cfg = preset_config("custom");
  cfg.basis = "wavelet";
  cfg.levels = 8;
  cfg.coarse_level = 3;
  cfg.truths = {TruthConfig{"blocks"}};
  PriorConfig sure;
  sure.method = "sureshrink";
  PriorConfig wot;
  wot.scaling = "wavelet-ot";
  cfg.priors = {sure, wot};
  cfg.n_grid = {1.0, 16.0};
  cfg.replications = 2;
  cfg.bands = "none";
  const auto r = run_experiment(cfg, false);
  REQUIRE(r.errors.size() == 4);
  CHECK(r.errors[0].prior == "sureshrink");
  for (const auto& e : r.errors) CHECK(e.value > 0);
  CHECK(r.errors[2].value < r.errors[0].value);

  auto bad = cfg;
  bad.basis = "cosine";
  CHECK_THROWS_AS(run_experiment(bad, false), ConfigError);
}
