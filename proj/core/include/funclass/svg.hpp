#pragma once

#include <string>
#include <vector>

namespace funclass {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal log-log line plot: frame, decade ticks, one polyline per series,
// legend.  Points with a non-positive or non-finite coordinate are dropped;
// if nothing survives the frame is drawn with a notice instead of data.
std::string render_loglog_svg(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series);

}  // namespace funclass
