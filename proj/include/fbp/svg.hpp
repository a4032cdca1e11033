#pragma once

#include <string>
#include <vector>

#include "fbp/grid.hpp"

namespace fbp {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot on a fixed 640x400 viewport. Output depends only on the input.
std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series, bool log_x = false);

/// Points drawn as small dots with equal axis scales.
std::string svg_point_plot(const std::string& title, const std::vector<Point>& points);

/// Grey-scale cells, at most 200 per side (nodes are subsampled).
std::string svg_heatmap(const std::string& title, const ScalarField& u);

}  // namespace fbp
