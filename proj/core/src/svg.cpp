#include "funclass/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace funclass {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 56.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#17becf"};
constexpr int kPaletteSize = 6;

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string px(double v) { return fmt(v, "%.2f"); }

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct LogRange {
  double lo = 0.0;
  double hi = 1.0;
};

LogRange expand(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi};
}

std::vector<double> decade_ticks(const LogRange& r) {
  std::vector<double> ticks;
  int first = static_cast<int>(std::ceil(r.lo - 1e-9));
  int last = static_cast<int>(std::floor(r.hi + 1e-9));
  int count = last - first + 1;
  if (count >= 2) {
    int stride = (count + 7) / 8;
    for (int e = first; e <= last; e += stride) ticks.push_back(e);
  } else {
    ticks.push_back(r.lo);
    ticks.push_back(r.hi);
  }
  return ticks;
}

std::string tick_label(double exponent) {
  double v = std::pow(10.0, exponent);
  return fmt(v, "%.4g");
}

}  // namespace

std::string render_loglog_svg(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series) {
  struct CleanSeries {
    std::string label;
    std::vector<std::pair<double, double>> pts;  // log10 coordinates
  };
  std::vector<CleanSeries> clean;
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
  bool any = false;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("render_loglog_svg: x/y size mismatch");
    }
    CleanSeries cs;
    cs.label = s.label;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i], yv = s.y[i];
      if (!(xv > 0.0) || !(yv > 0.0) || !std::isfinite(xv) ||
          !std::isfinite(yv)) {
        continue;
      }
      double lx = std::log10(xv), ly = std::log10(yv);
      if (!any) {
        xlo = xhi = lx;
        ylo = yhi = ly;
        any = true;
      } else {
        xlo = std::min(xlo, lx);
        xhi = std::max(xhi, lx);
        ylo = std::min(ylo, ly);
        yhi = std::max(yhi, ly);
      }
      cs.pts.emplace_back(lx, ly);
    }
    clean.push_back(std::move(cs));
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) +
         "\" height=\"" + px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) +
         " " + px(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + px(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"monospace\" font-size=\"16\">" +
         escape_xml(title) + "</text>\n";

  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" +
         px(plot_w) + "\" height=\"" + px(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"" +
         px(kHeight - 12.0) + "\" text-anchor=\"middle\" "
         "font-family=\"monospace\" font-size=\"13\">" +
         escape_xml(x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + px(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " +
         px(kTop + plot_h / 2) + ")\">" + escape_xml(y_label) + "</text>\n";

  if (!any) {
    out += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"" +
           px(kTop + plot_h / 2) + "\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"14\">no positive data"
           "</text>\n</svg>\n";
    return out;
  }

  LogRange xr = expand(xlo, xhi);
  LogRange yr = expand(ylo, yhi);
  auto map_x = [&](double lx) {
    return kLeft + (lx - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  auto map_y = [&](double ly) {
    return kTop + (yr.hi - ly) / (yr.hi - yr.lo) * plot_h;
  };

  for (double e : decade_ticks(xr)) {
    double gx = map_x(e);
    out += "<line x1=\"" + px(gx) + "\" y1=\"" + px(kTop) + "\" x2=\"" +
           px(gx) + "\" y2=\"" + px(kTop + plot_h) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + px(gx) + "\" y=\"" + px(kTop + plot_h + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"11\">" + tick_label(e) + "</text>\n";
  }
  for (double e : decade_ticks(yr)) {
    double gy = map_y(e);
    out += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(gy) + "\" x2=\"" +
           px(kLeft + plot_w) + "\" y2=\"" + px(gy) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + px(kLeft - 6.0) + "\" y=\"" + px(gy + 4.0) +
           "\" text-anchor=\"end\" font-family=\"monospace\" "
           "font-size=\"11\">" + tick_label(e) + "</text>\n";
  }

  int color = 0;
  double legend_y = kTop + 14.0;
  for (const CleanSeries& cs : clean) {
    const char* stroke = kPalette[color % kPaletteSize];
    ++color;
    if (!cs.pts.empty()) {
      std::string pts;
      for (const auto& [lx, ly] : cs.pts) {
        if (!pts.empty()) pts += ' ';
        pts += px(map_x(lx)) + "," + px(map_y(ly));
      }
      out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
             stroke + "\" stroke-width=\"1.5\"/>\n";
      for (const auto& [lx, ly] : cs.pts) {
        out += "<circle cx=\"" + px(map_x(lx)) + "\" cy=\"" + px(map_y(ly)) +
               "\" r=\"2.5\" fill=\"" + stroke + "\"/>\n";
      }
    }
    double lx0 = kLeft + plot_w - 150.0;
    out += "<line x1=\"" + px(lx0) + "\" y1=\"" + px(legend_y - 4.0) +
           "\" x2=\"" + px(lx0 + 24.0) + "\" y2=\"" + px(legend_y - 4.0) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + px(lx0 + 30.0) + "\" y=\"" + px(legend_y) +
           "\" font-family=\"monospace\" font-size=\"12\">" +
           escape_xml(cs.label) + "</text>\n";
    legend_y += 16.0;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace funclass
