#include "intdim/svg_plot.hpp"

#include <algorithm>
#include <cmath>

#include "intdim/format.hpp"

namespace intdim {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 60.0, kRight = 160.0, kTop = 40.0, kBottom = 50.0;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title) {
  double y_max = 1.0;
  for (const auto& s : series)
    for (double v : s.y)
      if (std::isfinite(v)) y_max = std::max(y_max, std::ceil(v * 2.0) / 2.0);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + std::clamp(x, 0.0, 1.0) * pw; };
  auto py = [&](double y) { return kTop + ph - std::clamp(y, 0.0, y_max) / y_max * ph; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                    num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double x = i / 10.0;
    out += "<line x1=\"" + num(px(x)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(px(x)) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    if (i % 2 == 0)
      out += "<text x=\"" + num(px(x)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
             format_fixed(x, 1) + "</text>\n";
  }
  const int y_ticks = static_cast<int>(std::lround(y_max * 4.0));
  for (int i = 0; i <= y_ticks; ++i) {
    const double y = i / 4.0;
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
           num(py(y)) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\">" +
           format_fixed(y, 2) + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">theta</text>\n";
  out += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">dimension</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = kPalette[k % std::size(kPalette)];
    if (s.scatter) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
        if (std::isfinite(s.y[i]))
          out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"2.5\" fill=\"" + color +
                 "\" fill-opacity=\"0.6\"/>\n";
    } else {
      out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        out += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      }
      out += "\"/>\n";
    }
    const double ly = kTop + 12 + 18.0 * static_cast<double>(k);
    const double lx = kLeft + pw + 12;
    if (s.scatter)
      out += "<circle cx=\"" + num(lx + 10) + "\" cy=\"" + num(ly - 4) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    else
      out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" +
             num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly) + "\">" + escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace intdim
