#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qheat/errors.hpp"

namespace qheat::cli {

namespace {
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
}

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& x, const std::vector<SvgSeries>& series) {
  const double width = 720, height = 440, ml = 60, mr = 15, mt = 30, mb = 40;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (double v : x) {
    x_lo = std::min(x_lo, v);
    x_hi = std::max(x_hi, v);
  }
  for (const auto& s : series)
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  auto px = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  auto py = [&](double v) { return height - mb - (v - y_lo) / (y_hi - y_lo) * (height - mt - mb); };

  std::string svg;
  char buf[256];
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\">\n";
  svg += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">%s</text>\n",
                ml, title.c_str());
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                ml, height - mb, width - mr, height - mb);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                ml, mt, ml, height - mb);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
                5.0, height - mb, y_lo);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
                5.0, mt + 10, y_hi);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
                ml, height - 10, x_lo);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
                width - mr - 50, height - 10, x_hi);
  svg += buf;

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += kColors[si % 4];
    svg += "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x[i]), py(s.y[i]));
      svg += buf;
    }
    svg += "\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                  "fill=\"%s\">%s</text>\n",
                  width - mr - 120, mt + 16.0 * (si + 1), kColors[si % 4], s.label.c_str());
    svg += buf;
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open SVG output: " + path);
  out << svg;
}

}  // namespace qheat::cli
