#pragma once

#include <string>
#include <vector>

namespace adacons::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // same length as the shared x axis
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 800;
  int height = 480;
  bool log_y = false;  // log10 axis; nonpositive samples are clipped
};

/// Self-contained SVG 1.1 line plot with axes, ticks and a legend. Series
/// longer than ~2000 points are decimated.
std::string line_plot(const PlotSpec& spec, const std::vector<double>& x,
                      const std::vector<Series>& series);

}  // namespace adacons::svg
