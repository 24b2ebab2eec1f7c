#include "hts/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hts/error.hpp"

namespace hts {

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// 1-2-5 tick step covering the range in about five intervals.
double tick_step(double span) {
  if (!(span > 0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

void LineChart::write(std::ostream& out) const {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto extend = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ShapeError("plot series x and y differ in length");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      x0 = std::min(x0, xs[i]);
      x1 = std::max(x1, xs[i]);
      y0 = std::min(y0, ys[i]);
      y1 = std::max(y1, ys[i]);
    }
  };
  for (const auto& s : series) extend(s.x, s.y);
  if (!band_x.empty()) {
    extend(band_x, band_lower);
    extend(band_x, band_upper);
  }
  if (!(x1 >= x0)) x0 = 0, x1 = 1;
  if (!(y1 >= y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  std::size_t longest = 0;
  for (const auto& s : series) longest = std::max(longest, s.name.size());
  const double right = std::max(150.0, 45.0 + 6.5 * static_cast<double>(longest));
  const double total = width + right - 150.0;
  const double left = 70, top = 40, bottom = 50;
  const double pw = width - left - 150.0, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
        << "</text>\n";

  if (!band_x.empty()) {
    out << "<polygon fill=\"#c8c8c8\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < band_x.size(); ++i) out << num(sx(band_x[i])) << "," << num(sy(band_upper[i])) << " ";
    for (std::size_t i = band_x.size(); i-- > 0;) out << num(sx(band_x[i])) << "," << num(sy(band_lower[i])) << " ";
    out << "\"/>\n";
  }

  out << "<g stroke=\"black\" fill=\"none\">\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw) << "\" y2=\""
      << num(top + ph) << "\"/>\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\"" << num(top + ph)
      << "\"/>\n";
  out << "</g>\n";

  const double xs = tick_step(x1 - x0), ys = tick_step(y1 - y0);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    out << "<line stroke=\"black\" x1=\"" << num(sx(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(sx(t))
        << "\" y2=\"" << num(top + ph + 4) << "\"/>";
    out << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
        << num(std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
  }
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    out << "<line stroke=\"black\" x1=\"" << num(left - 4) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(sy(t)) << "\"/>";
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">"
        << num(std::abs(t) < 1e-12 * ys ? 0.0 : t) << "</text>\n";
  }
  if (!x_label.empty())
    out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 10) << "\" text-anchor=\"middle\">"
        << esc(x_label) << "</text>\n";
  if (!y_label.empty())
    out << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << esc(y_label) << "</text>\n";

  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << esc(s.color) << "\" stroke-width=\"" << num(s.width)
        << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) out << num(sx(s.x[i])) << "," << num(sy(s.y[i])) << " ";
    out << "\"/>\n";
    if (s.markers)
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
          out << "<circle r=\"3\" fill=\"" << esc(s.color) << "\" cx=\"" << num(sx(s.x[i])) << "\" cy=\""
              << num(sy(s.y[i])) << "\"/>\n";
  }

  double ly = top + 10;
  for (const auto& s : series) {
    out << "<line stroke=\"" << esc(s.color) << "\" stroke-width=\"2\" x1=\"" << num(left + pw + 12) << "\" y1=\""
        << num(ly) << "\" x2=\"" << num(left + pw + 32) << "\" y2=\"" << num(ly) << "\"/>";
    out << "<text x=\"" << num(left + pw + 36) << "\" y=\"" << num(ly + 4) << "\">" << esc(s.name) << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
}

std::string LineChart::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace hts
