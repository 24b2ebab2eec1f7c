#include "hts/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "hts/error.hpp"
#include "hts/layout.hpp"

namespace hts {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const bool whole = std::abs(v) < 1e15 && v == std::floor(v);
  const auto res = whole ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  if (first < last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw InvalidInput("not a number: '" + s + "'");
  return v;
}

std::pair<int, std::size_t> csv_index(const BasisDescriptor& basis, std::size_t c) {
  if (!basis.is_wavelet()) return {-2, c + 1};
  const int j = basis.frame().level_of(c);
  if (j < 0) return {-1, c};
  return {j, c - level_begin(j)};
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

namespace {

void write_meta(std::ostream& out, const CsvMeta& meta) {
  out << "#";
  bool first = true;
  for (const auto& [k, v] : meta) {
    out << (first ? " " : ",") << k << "=" << v;
    first = false;
  }
  out << "\n";
}

CsvMeta parse_meta(const std::string& line) {
  CsvMeta meta;
  std::string body = line.substr(1);
  for (const std::string& item : split_csv_line(body)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    std::string key = item.substr(0, eq);
    while (!key.empty() && key.front() == ' ') key.erase(key.begin());
    meta[key] = item.substr(eq + 1);
  }
  return meta;
}

}  // namespace

void write_coefficients_csv(std::ostream& out, std::span<const double> values, const BasisDescriptor& basis,
                            const CsvMeta& meta) {
  write_meta(out, meta);
  out << "index_j,index_k,value\n";
  for (std::size_t c = 0; c < values.size(); ++c) {
    const auto [j, k] = csv_index(basis, c);
    out << j << "," << k << "," << format_double(values[c]) << "\n";
  }
}

void write_sequence_csv(std::ostream& out, const SequenceData& data) {
  CsvMeta meta{{"n", format_double(data.noise_precision)},
               {"K", std::to_string(data.truncation)},
               {"seed", std::to_string(data.seed)},
               {"basis", data.basis.name()}};
  if (data.basis.is_wavelet()) {
    meta["levels"] = std::to_string(data.basis.frame().levels());
    meta["coarse_level"] = std::to_string(data.basis.frame().coarse_level());
  }
  write_coefficients_csv(out, data.observations, data.basis, meta);
}

CoefficientTable read_coefficients_csv(std::istream& in) {
  CoefficientTable t;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const CsvMeta m = parse_meta(line);
      t.meta.insert(m.begin(), m.end());
      continue;
    }
    if (!header) {
      if (line.rfind("index_j,index_k,value", 0) != 0) throw InvalidInput("missing index_j,index_k,value header");
      header = true;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() < 3) throw InvalidInput("short row at line " + std::to_string(lineno));
    t.index_j.push_back(static_cast<int>(parse_double(cells[0])));
    t.index_k.push_back(static_cast<std::size_t>(parse_double(cells[1])));
    t.values.push_back(parse_double(cells[2]));
  }
  if (!header) throw InvalidInput("empty coefficient file");
  return t;
}

void write_summary_csv(std::ostream& out, const PosteriorSummary& s, const BasisDescriptor& basis, const CsvMeta& meta) {
  CsvMeta m = meta;
  m["method"] = method_name(s.provenance);
  write_meta(out, m);
  out << "index_j,index_k,mean,var,q05,q50,q95\n";
  for (std::size_t c = 0; c < s.size(); ++c) {
    const auto [j, k] = csv_index(basis, c);
    out << j << "," << k << "," << format_double(s.mean[c]) << "," << format_double(s.variance[c]) << ","
        << format_double(s.q05[c]) << "," << format_double(s.q50[c]) << "," << format_double(s.q95[c]) << "\n";
  }
}

void write_draws_csv(std::ostream& out, const PosteriorSummary& s, const BasisDescriptor& basis) {
  if (!s.has_draws()) throw StateError("summary stores no draws");
  out << "index_j,index_k";
  for (std::size_t d = 0; d < s.draw_count; ++d) out << ",d" << d;
  out << "\n";
  for (std::size_t c = 0; c < s.size(); ++c) {
    const auto [j, k] = csv_index(basis, c);
    out << j << "," << k;
    for (double v : s.coordinate_draws(c)) out << "," << format_double(v);
    out << "\n";
  }
}

void write_diagnostics_json(std::ostream& out, const PosteriorSummary& s, const CsvMeta& meta) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  j["method"] = method_name(s.provenance);
  j["coordinates"] = s.size();
  j["draws"] = s.draw_count;
  const auto& d = s.diagnostics;
  if (!d.acceptance.empty()) {
    double lo = 1.0, hi = 0.0, avg = 0.0;
    for (double a : d.acceptance) {
      lo = std::min(lo, a);
      hi = std::max(hi, a);
      avg += a;
    }
    j["acceptance"] = {{"mean", avg / static_cast<double>(d.acceptance.size())}, {"min", lo}, {"max", hi}};
  }
  if (!d.panels.empty()) {
    int top = 0;
    double avg = 0.0;
    for (int p : d.panels) {
      top = std::max(top, p);
      avg += p;
    }
    j["panels"] = {{"mean", avg / static_cast<double>(d.panels.size())}, {"max", top}};
  }
  if (s.provenance == FitMethod::Gibbs) {
    j["hyper_acceptance"] = d.hyper_acceptance;
    j["tau_mean"] = d.tau_mean;
    j["alpha_mean"] = d.alpha_mean;
  }
  out << j.dump(2) << "\n";
}

}  // namespace hts
