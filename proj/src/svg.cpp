#include "banditlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace banditlab {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

std::string render_line_plot(const SvgPlotSpec& spec) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const SvgSeries& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double xv = spec.log_x ? std::log10(s.x[i]) : s.x[i];
      if (!std::isfinite(xv) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin < xmax)) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (spec.hline) {
    ymin = std::min(ymin, *spec.hline);
    ymax = std::max(ymax, *spec.hline);
  }
  if (!(ymin < ymax)) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double xv) {
    const double v = spec.log_x ? std::log10(xv) : xv;
    return kMarginLeft + (v - xmin) / (xmax - xmin) * plot_w;
  };
  auto py = [&](double yv) {
    return kMarginTop + (ymax - yv) / (ymax - ymin) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
      << kHeight << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>"
      << spec.title << "</text>\n";

  // frame and ticks
  out << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='" << plot_w
      << "' height='" << plot_h << "' fill='none' stroke='#333'/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double f = static_cast<double>(i) / ticks;
    const double xv = xmin + f * (xmax - xmin);
    const double gx = kMarginLeft + f * plot_w;
    out << "<line x1='" << gx << "' y1='" << kMarginTop + plot_h << "' x2='" << gx
        << "' y2='" << kMarginTop + plot_h + 5 << "' stroke='#333'/>\n";
    const double label = spec.log_x ? std::pow(10.0, xv) : xv;
    out << "<text x='" << gx << "' y='" << kMarginTop + plot_h + 20
        << "' text-anchor='middle' font-size='11'>" << fmt(label) << "</text>\n";
    const double yv = ymin + f * (ymax - ymin);
    const double gy = kMarginTop + plot_h - f * plot_h;
    out << "<line x1='" << kMarginLeft - 5 << "' y1='" << gy << "' x2='" << kMarginLeft
        << "' y2='" << gy << "' stroke='#333'/>\n";
    out << "<text x='" << kMarginLeft - 8 << "' y='" << gy + 4
        << "' text-anchor='end' font-size='11'>" << fmt(yv) << "</text>\n";
  }
  out << "<text x='" << kMarginLeft + plot_w / 2 << "' y='" << kHeight - 12
      << "' text-anchor='middle' font-size='13'>" << spec.x_label << "</text>\n";
  out << "<text x='16' y='" << kMarginTop + plot_h / 2
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")'>" << spec.y_label << "</text>\n";

  if (spec.hline && *spec.hline >= ymin && *spec.hline <= ymax) {
    out << "<line x1='" << kMarginLeft << "' y1='" << py(*spec.hline) << "' x2='"
        << kMarginLeft + plot_w << "' y2='" << py(*spec.hline)
        << "' stroke='#999' stroke-dasharray='6,4'/>\n";
  }

  double legend_y = kMarginTop + 14;
  for (const SvgSeries& s : spec.series) {
    out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
    }
    out << "'/>\n";
    if (!s.label.empty()) {
      out << "<line x1='" << kMarginLeft + plot_w - 130 << "' y1='" << legend_y
          << "' x2='" << kMarginLeft + plot_w - 110 << "' y2='" << legend_y
          << "' stroke='" << s.color << "' stroke-width='2'/>\n";
      out << "<text x='" << kMarginLeft + plot_w - 104 << "' y='" << legend_y + 4
          << "' font-size='11'>" << s.label << "</text>\n";
      legend_y += 16;
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace banditlab
