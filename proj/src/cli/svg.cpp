#include "fbp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fbp {

namespace {

constexpr double kW = 640.0;
constexpr double kH = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Range {
  double lo = INFINITY;
  double hi = -INFINITY;
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

void header(std::ostringstream& o, const std::string& title) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
    << kW << ' ' << kH << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << escape(title) << "</text>\n";
}

void axes(std::ostringstream& o, const Range& xr, const Range& yr, const std::string& xlabel,
          const std::string& ylabel, bool log_x) {
  const double x1 = kW - kRight, y1 = kH - kBottom;
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << x1 - kLeft << "\" height=\"" << y1 - kTop
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = t / 4.0;
    const double xv = log_x ? std::pow(10.0, xr.lo + fx * (xr.hi - xr.lo)) : xr.lo + fx * (xr.hi - xr.lo);
    const double yv = yr.lo + fx * (yr.hi - yr.lo);
    const double px = kLeft + fx * (x1 - kLeft);
    const double py = y1 - fx * (y1 - kTop);
    o << "<text x=\"" << num(px) << "\" y=\"" << y1 + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(xv) << "</text>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(yv) << "</text>\n";
  }
  o << "<text x=\"" << (kLeft + x1) / 2 << "\" y=\"" << kH - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (kTop + y1) / 2 << "\" transform=\"rotate(-90 16 " << (kTop + y1) / 2
    << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(ylabel) << "</text>\n";
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series, bool log_x) {
  auto tx = [&](double v) { return log_x ? (v > 0.0 ? std::log10(v) : NAN) : v; };
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(tx(v));
    for (double v : s.y) yr.add(v);
  }
  xr.settle();
  yr.settle();
  const double x1 = kW - kRight, y1 = kH - kBottom;
  std::ostringstream o;
  header(o, title);
  axes(o, xr, yr, xlabel, ylabel, log_x);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    // Non-finite values split the series into separate polylines.
    const std::size_t n = std::min(s.x.size(), s.y.size());
    bool open = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double xv = tx(s.x[i]);
      if (!std::isfinite(xv) || !std::isfinite(s.y[i])) {
        if (open) o << "\"/>\n";
        open = false;
        continue;
      }
      if (!open) o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      open = true;
      const double px = kLeft + (xv - xr.lo) / (xr.hi - xr.lo) * (x1 - kLeft);
      const double py = y1 - (s.y[i] - yr.lo) / (yr.hi - yr.lo) * (y1 - kTop);
      o << num(px) << ',' << num(py) << ' ';
    }
    if (open) o << "\"/>\n";
    if (!s.label.empty()) {
      const double ly = kTop + 14 + 14 * static_cast<double>(k);
      o << "<text x=\"" << x1 - 6 << "\" y=\"" << ly << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\" fill=\"" << color << "\">" << escape(s.label) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_point_plot(const std::string& title, const std::vector<Point>& points) {
  Range xr, yr;
  for (const auto& p : points) {
    xr.add(p.x);
    yr.add(p.y);
  }
  xr.settle();
  yr.settle();
  // Equal scales: widen the narrower range about its middle.
  const double pw = kW - kRight - kLeft, ph = kH - kBottom - kTop;
  const double scale = std::max((xr.hi - xr.lo) / pw, (yr.hi - yr.lo) / ph);
  const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
  xr = {cx - 0.5 * scale * pw, cx + 0.5 * scale * pw};
  yr = {cy - 0.5 * scale * ph, cy + 0.5 * scale * ph};
  std::ostringstream o;
  header(o, title);
  axes(o, xr, yr, "x", "y", false);
  for (const auto& p : points) {
    const double px = kLeft + (p.x - xr.lo) / scale;
    const double py = kH - kBottom - (p.y - yr.lo) / scale;
    o << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"1.2\" fill=\"#1f77b4\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const std::string& title, const ScalarField& u) {
  const Grid2D& g = u.grid();
  const int step = std::max(1, (std::max(g.nx(), g.ny()) + 199) / 200);
  const int cols = (g.nx() + step - 1) / step, rows = (g.ny() + step - 1) / step;
  Range vr;
  for (double v : u.values()) vr.add(v);
  vr.settle();
  const double pw = kW - kRight - kLeft, ph = kH - kBottom - kTop;
  const double cell = std::min(pw / cols, ph / rows);
  const Rect b = g.bounds();
  std::ostringstream o;
  header(o, title);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = u(c * step, r * step);
      const int grey = static_cast<int>(std::lround(255.0 * (1.0 - (v - vr.lo) / (vr.hi - vr.lo))));
      char color[8];
      std::snprintf(color, sizeof color, "#%02x%02x%02x", grey, grey, grey);
      o << "<rect x=\"" << num(kLeft + c * cell) << "\" y=\"" << num(kTop + (rows - 1 - r) * cell) << "\" width=\""
        << num(cell) << "\" height=\"" << num(cell) << "\" fill=\"" << color << "\"/>\n";
    }
  }
  o << "<text x=\"" << kLeft << "\" y=\"" << kH - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">["
    << num(b.x0) << ", " << num(b.x1) << "] x [" << num(b.y0) << ", " << num(b.y1) << "], u in [" << num(vr.lo)
    << ", " << num(vr.hi) << "]</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace fbp
