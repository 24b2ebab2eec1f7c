#pragma once

// Minimal self-contained SVG line charts.

#include <iosfwd>
#include <string>
#include <vector>

namespace hts {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e9c";
  bool markers = false;
  double width = 1.5;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  /// Filled region between two y vectors on a shared x (credible bands).
  std::vector<double> band_x, band_lower, band_upper;
  double width = 640;
  double height = 400;

  void write(std::ostream& out) const;
  std::string str() const;
};

}  // namespace hts
