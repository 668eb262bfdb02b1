// svg.hpp — Minimal line-chart emitter (convenience output, never load-bearing)

#pragma once

#include <string>
#include <vector>

namespace qheat::cli {

struct SvgSeries {
  std::string label;
  std::vector<double> y;
};

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& x, const std::vector<SvgSeries>& series);

}  // namespace qheat::cli
