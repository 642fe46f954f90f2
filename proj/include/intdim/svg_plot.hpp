#pragma once

#include <string>
#include <vector>

namespace intdim {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool scatter = false;  // markers only, no connecting line
};

/// Static SVG with theta on the abscissa ([0,1]) and dimension on the ordinate ([0, y_max]);
/// y_max is the largest value rounded up to a half, at least 1.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title);

}  // namespace intdim
