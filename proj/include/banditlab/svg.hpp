#pragma once

#include <optional>
#include <string>
#include <vector>

namespace banditlab {

// Just enough SVG to eyeball the figures; the CSVs are the interface of record.
struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f6fb2";
  std::string label;
};

struct SvgPlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::optional<double> hline;  // dashed reference line
  std::vector<SvgSeries> series;
};

std::string render_line_plot(const SvgPlotSpec& spec);

}  // namespace banditlab
