#include "adacons/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "adacons/error.hpp"

namespace adacons::svg {

namespace {

constexpr std::size_t kMaxPoints = 2000;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

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

// Tick positions at 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string line_plot(const PlotSpec& spec, const std::vector<double>& x,
                      const std::vector<Series>& series) {
  for (const Series& s : series) {
    if (s.values.size() != x.size()) throw ValidationError("svg: series length differs from x axis");
  }
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;

  const auto ty = [&](double v) {
    if (!spec.log_y) return v;
    return std::log10(std::max(v, 1e-300));
  };

  double xmin = x.empty() ? 0.0 : x.front();
  double xmax = x.empty() ? 1.0 : x.back();
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const Series& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v) || (spec.log_y && v <= 0.0)) continue;
      ymin = std::min(ymin, ty(v));
      ymax = std::max(ymax, ty(v));
    }
  }
  if (!std::isfinite(ymin)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (spec.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (!(ymax > ymin)) {
    const double pad = std::max(1.0, std::abs(ymin)) * 0.05;
    ymin -= pad;
    ymax += pad;
  } else if (!spec.log_y) {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  const auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n"
      << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(xmin, xmax)) {
    out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(px(t))
        << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>"
        << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  const std::vector<double> yt =
      spec.log_y ? [&] {
        std::vector<double> v;
        const int stride = std::max(1, static_cast<int>((ymax - ymin) / 8.0));
        for (double e = ymin; e <= ymax + 1e-9; e += stride) v.push_back(e);
        return v;
      }()
                 : nice_ticks(ymin, ymax);
  for (double t : yt) {
    out << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>"
        << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left + pw)
        << "\" y2=\"" << num(py(t)) << "\" stroke=\"#e0e0e0\"/>"
        << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4)
        << "\" text-anchor=\"end\">" << (spec.log_y ? "1e" + tick_label(t) : tick_label(t))
        << "</text>\n";
  }
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(spec.height - 18.0)
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n"
      << "<text transform=\"translate(20," << num(top + ph / 2) << ") rotate(-90)\" "
      << "text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  const std::size_t stride = std::max<std::size_t>(1, (x.size() + kMaxPoints - 1) / kMaxPoints);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); i += stride) {
      const double v = series[k].values[i];
      if (!std::isfinite(v) || (spec.log_y && v <= 0.0)) continue;
      out << num(px(x[i])) << ',' << num(py(std::clamp(ty(v), ymin, ymax))) << ' ';
    }
    out << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << num(left + pw + 15) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(left + pw + 40) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << num(left + pw + 46) << "\" y=\"" << num(ly + 4) << "\">"
        << escape(series[k].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace adacons::svg
