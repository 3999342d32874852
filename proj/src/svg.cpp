#include "nhssh/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nhssh::svg {

namespace {

constexpr std::array<const char*, 4> kOrder{"PBC", "xOBC", "yOBC", "xyOBC"};
constexpr std::array<const char*, 4> kColors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

std::string fmt(double x, int decimals = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  // avoid "-0.00"
  if (std::string(buf).find_first_not_of("-0.") == std::string::npos) std::snprintf(buf, sizeof buf, "%.*f", decimals, 0.0);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
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

// 1-2-5 step giving roughly `target` intervals over [lo, hi].
double nice_step(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

struct Range {
  double lo, hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double half = std::max(1e-3, std::abs(lo) * 0.1);
    return {lo - half, hi + half};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string bc_color(const std::string& bc) {
  const int r = bc_rank(bc);
  return r < static_cast<int>(kColors.size()) ? kColors[static_cast<std::size_t>(r)] : "#7f7f7f";
}

int bc_rank(const std::string& bc) {
  for (std::size_t i = 0; i < kOrder.size(); ++i)
    if (bc == kOrder[i]) return static_cast<int>(i);
  return static_cast<int>(kOrder.size());
}

std::string render_scatter(const std::vector<Series>& series, const PlotOptions& opts) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (auto z : s.points) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
  if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;
  const Range xr = padded(xmin, xmax);
  const Range yr = padded(ymin, ymax);

  const double left = 70, right = 130, top = 40, bottom = 50;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
    << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
  if (!opts.metadata.empty()) o << "<metadata>" << escape(opts.metadata) << "</metadata>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << escape(opts.title) << "</text>\n";

  // frame and ticks
  o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  const double xs = nice_step(xr.lo, xr.hi, 6);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi; t += xs) {
    o << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(px(t)) << "\" y2=\""
      << fmt(top + ph + 5) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(top + ph + 17) << "\" text-anchor=\"middle\">"
      << tick_label(t) << "</text>\n";
  }
  const double ys = nice_step(yr.lo, yr.hi, 6);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi; t += ys) {
    o << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << fmt(left) << "\" y2=\""
      << fmt(py(t)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(py(t) + 3) << "\" text-anchor=\"end\">" << tick_label(t)
      << "</text>\n";
  }
  o << "</g>\n";
  // zero axes, when visible
  if (xr.lo < 0 && xr.hi > 0)
    o << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(px(0)) << "\" y2=\""
      << fmt(top + ph) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"3,3\"/>\n";
  if (yr.lo < 0 && yr.hi > 0)
    o << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
      << fmt(py(0)) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"3,3\"/>\n";
  o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(opts.height - 10.0)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(opts.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"12\" transform=\"rotate(-90 16 " << fmt(top + ph / 2) << ")\">" << escape(opts.y_label) << "</text>\n";

  for (const auto& s : series) {
    o << "<g fill=\"" << escape(s.color) << "\" fill-opacity=\"0.7\">\n";
    for (auto z : s.points) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      o << "<circle cx=\"" << fmt(px(z.real())) << "\" cy=\"" << fmt(py(z.imag())) << "\" r=\""
        << fmt(opts.marker_radius) << "\"/>\n";
    }
    o << "</g>\n";
  }

  // legend
  double ly = top + 10;
  for (const auto& s : series) {
    o << "<circle cx=\"" << fmt(left + pw + 20) << "\" cy=\"" << fmt(ly) << "\" r=\"4\" fill=\"" << escape(s.color)
      << "\"/><text x=\"" << fmt(left + pw + 30) << "\" y=\"" << fmt(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
    ly += 18;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace nhssh::svg
