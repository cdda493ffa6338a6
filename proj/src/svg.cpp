#include "orthoreg/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace orthoreg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v, bool log) {
  char buf[32];
  if (log) std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
  else std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo <= 0.0) lo -= 0.5, hi += 0.5;
  }
};

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

void write_svg_plot(std::ostream& out, const std::vector<PlotSeries>& series, const PlotOptions& opts) {
  auto tx = [&](double v) { return opts.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!opts.log_x || x > 0.0) && (!opts.log_y || y > 0.0);
  };

  Range rx;
  Range ry;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      rx.add(tx(s.x[i]));
      ry.add(ty(s.y[i]));
    }
  }
  rx.finish();
  ry.finish();

  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto px = [&](double v) { return left + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return top + ph - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(opts.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(opts.title) << "</text>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw)
      << "\" y2=\"" << num(top + ph) << "\"/>\n"
      << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
      << "\" y2=\"" << num(top + ph) << "\"/>\n"
      << "</g>\n<g font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double vx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
    const double vy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
    out << "<text x=\"" << num(px(vx)) << "\" y=\"" << num(top + ph + 16)
        << "\" text-anchor=\"middle\">" << tick_label(vx, opts.log_x) << "</text>\n"
        << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(vy) + 4)
        << "\" text-anchor=\"end\">" << tick_label(vy, opts.log_y) << "</text>\n";
  }
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opts.height - 10.0)
      << "\" text-anchor=\"middle\">" << escape(opts.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(top + ph / 2) << ")\">" << escape(opts.y_label) << "</text>\n</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % kColors.size()];
    std::string d;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      d += (d.empty() ? "M" : " L") + num(px(tx(s.x[i]))) + ',' + num(py(ty(s.y[i])));
    }
    out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"><title>" << escape(s.name) << "</title></path>\n";
    out << "<text x=\"" << num(left + pw - 4) << "\" y=\"" << num(top + 14.0 + 14.0 * k)
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << escape(s.name)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace orthoreg
