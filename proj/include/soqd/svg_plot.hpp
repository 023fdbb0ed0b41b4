#pragma once

#include <string>
#include <vector>

namespace soqd {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line plot: 800x500 viewport, linear axes with ticks, one polyline per series.
std::string svg_line_plot(const std::vector<Series>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

}  // namespace soqd
