#pragma once

// Flat-file formats: coefficient CSVs (index_j,index_k,value with a leading
// comment row of metadata), posterior summaries, draw matrices and JSON
// diagnostics sidecars. Numbers are written in shortest round-trip form.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hts/posterior.hpp"
#include "hts/sequence_model.hpp"

namespace hts {

std::string format_double(double v);
double parse_double(const std::string& s);

/// index_j, index_k of flat coordinate c; single-index bases use j = -2 and k = c + 1.
std::pair<int, std::size_t> csv_index(const BasisDescriptor& basis, std::size_t c);

using CsvMeta = std::map<std::string, std::string>;

void write_coefficients_csv(std::ostream& out, std::span<const double> values, const BasisDescriptor& basis,
                            const CsvMeta& meta);
void write_sequence_csv(std::ostream& out, const SequenceData& data);

struct CoefficientTable {
  CsvMeta meta;
  std::vector<int> index_j;
  std::vector<std::size_t> index_k;
  std::vector<double> values;
};

/// Throws InvalidInput on malformed rows.
CoefficientTable read_coefficients_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const PosteriorSummary& s, const BasisDescriptor& basis, const CsvMeta& meta);
/// One row per coordinate: index_j,index_k,d0,d1,...
void write_draws_csv(std::ostream& out, const PosteriorSummary& s, const BasisDescriptor& basis);
void write_diagnostics_json(std::ostream& out, const PosteriorSummary& s, const CsvMeta& meta);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace hts
