#ifndef ORTHOREG_SVG_HPP
#define ORTHOREG_SVG_HPP

// Minimal static line plots: axes, one <path> per series, a legend.

#include <iosfwd>
#include <string>
#include <vector>

namespace orthoreg {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Non-finite points, and nonpositive ones on a log axis, are dropped.
void write_svg_plot(std::ostream& out, const std::vector<PlotSeries>& series, const PlotOptions& opts);

}  // namespace orthoreg

#endif  // ORTHOREG_SVG_HPP
