// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace metamix {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string fmt3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

struct Axis {
  double lo, hi, x0, x1;

  double map(double v) const { return x0 + (v - lo) / (hi - lo) * (x1 - x0); }
};

}  // namespace

std::string forest_text(const Dataset& data, double combined_median_log,
                        const Interval& combined_ci_log, double level) {
  std::ostringstream os;
  char line[200];
  os << "study                          OR     " << 100.0 * level << "% CI\n";
  for (const auto& e : data.estimates) {
    const Interval ci = wald_ci(e, level);
    std::snprintf(line, sizeof(line), "%-28s %7.3f  [%7.3f, %7.3f]\n",
                  e.study_label.c_str(), std::exp(e.y), std::exp(ci.lower),
                  std::exp(ci.upper));
    os << line;
  }
  std::snprintf(line, sizeof(line), "%-28s %7.3f  [%7.3f, %7.3f]\n", "combined",
                std::exp(combined_median_log), std::exp(combined_ci_log.lower),
                std::exp(combined_ci_log.upper));
  os << line;
  return os.str();
}

std::string forest_svg(const Dataset& data, double combined_median_log,
                       const Interval& combined_ci_log, double level) {
  const int row_h = 22;
  const int top = 40;
  const int width = 720;
  const int rows = static_cast<int>(data.size()) + 1;
  const int height = top + rows * row_h + 40;

  double lo = combined_ci_log.lower;
  double hi = combined_ci_log.upper;
  for (const auto& e : data.estimates) {
    const Interval ci = wald_ci(e, level);
    lo = std::min(lo, ci.lower);
    hi = std::max(hi, ci.upper);
  }
  const double pad = 0.05 * (hi - lo);
  const Axis ax{lo - pad, hi + pad, 230.0, width - 20.0};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"20\" y=\"20\">odds ratio (log scale), " << 100.0 * level
     << "% CI</text>\n";

  // reference line at OR = 1
  if (ax.lo < 0.0 && ax.hi > 0.0) {
    os << "<line x1=\"" << fmt(ax.map(0.0)) << "\" y1=\"" << top << "\" x2=\""
       << fmt(ax.map(0.0)) << "\" y2=\"" << top + rows * row_h
       << "\" stroke=\"#999\" stroke-dasharray=\"4,3\"/>\n";
  }

  // axis ticks at round ORs
  for (double orv : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0}) {
    const double v = std::log(orv);
    if (v < ax.lo || v > ax.hi) continue;
    const double x = ax.map(v);
    const int y = top + rows * row_h;
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << y << "\" x2=\"" << fmt(x)
       << "\" y2=\"" << y + 5 << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << fmt(x - 8) << "\" y=\"" << y + 18 << "\">" << orv
       << "</text>\n";
  }

  int row = 0;
  for (const auto& e : data.estimates) {
    const int cy = top + row * row_h + row_h / 2;
    const Interval ci = wald_ci(e, level);
    os << "<text x=\"20\" y=\"" << cy + 4 << "\">" << e.study_label << "</text>\n";
    os << "<line x1=\"" << fmt(ax.map(ci.lower)) << "\" y1=\"" << cy << "\" x2=\""
       << fmt(ax.map(ci.upper)) << "\" y2=\"" << cy << "\" stroke=\"#1f77b4\"/>\n";
    os << "<rect x=\"" << fmt(ax.map(e.y) - 3) << "\" y=\"" << cy - 3
       << "\" width=\"6\" height=\"6\" fill=\"#1f77b4\"/>\n";
    ++row;
  }

  // combined-estimate diamond
  const int cy = top + row * row_h + row_h / 2;
  const double cx = ax.map(combined_median_log);
  const double xl = ax.map(combined_ci_log.lower);
  const double xr = ax.map(combined_ci_log.upper);
  os << "<text x=\"20\" y=\"" << cy + 4 << "\" font-weight=\"bold\">combined</text>\n";
  os << "<polygon points=\"" << fmt(xl) << "," << cy << " " << fmt(cx) << "," << cy - 6
     << " " << fmt(xr) << "," << cy << " " << fmt(cx) << "," << cy + 6
     << "\" fill=\"#d62728\"/>\n";
  os << "</svg>\n";
  return os.str();
}

std::string sweep_svg(const SweepResult& sweep) {
  if (sweep.rows.empty()) throw InputError("sweep_svg: empty sweep");
  const int width = 640, height = 400;
  const Axis xax{sweep.rows.front().setting, sweep.rows.back().setting, 60.0,
                 width - 20.0};
  double ylo = sweep.rows.front().ci_low, yhi = sweep.rows.front().ci_high;
  for (const auto& r : sweep.rows) {
    ylo = std::min(ylo, r.ci_low);
    yhi = std::max(yhi, r.ci_high);
  }
  const double pad = 0.08 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  const auto ymap = [&](double v) {
    return (height - 40.0) - (v - ylo) / (yhi - ylo) * (height - 80.0);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"20\" y=\"20\">log-OR estimate vs " << sweep.setting_name
     << " (median, CI band)</text>\n";

  os << "<polygon fill=\"#aec7e8\" stroke=\"none\" points=\"";
  for (const auto& r : sweep.rows) {
    os << fmt(xax.map(r.setting)) << "," << fmt(ymap(r.ci_high)) << " ";
  }
  for (auto it = sweep.rows.rbegin(); it != sweep.rows.rend(); ++it) {
    os << fmt(xax.map(it->setting)) << "," << fmt(ymap(it->ci_low)) << " ";
  }
  os << "\"/>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (const auto& r : sweep.rows) {
    os << fmt(xax.map(r.setting)) << "," << fmt(ymap(r.median)) << " ";
  }
  os << "\"/>\n";

  if (ylo < 0.0 && yhi > 0.0) {
    os << "<line x1=\"" << fmt(xax.x0) << "\" y1=\"" << fmt(ymap(0.0)) << "\" x2=\""
       << fmt(xax.x1) << "\" y2=\"" << fmt(ymap(0.0))
       << "\" stroke=\"#999\" stroke-dasharray=\"4,3\"/>\n";
  }

  // axis labels at the extremes and midpoint
  for (double v : {xax.lo, 0.5 * (xax.lo + xax.hi), xax.hi}) {
    os << "<text x=\"" << fmt(xax.map(v) - 10) << "\" y=\"" << height - 16 << "\">"
       << fmt3(v) << "</text>\n";
  }
  for (double v : {ylo + pad, 0.5 * (ylo + yhi), yhi - pad}) {
    os << "<text x=\"8\" y=\"" << fmt(ymap(v) + 4) << "\">" << fmt3(v) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace metamix
