#include "nnac/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>

#include "nnac/errors.hpp"

namespace nnac {

namespace {

constexpr double kWidth = 800, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;
constexpr const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
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

void check_range(const std::vector<NamedTrace>& traces, const Window& range) {
  if (!(range.t1 > range.t0)) throw RangeOutsideTrace("plot range must have positive length");
  for (const auto& nt : traces) {
    if (!nt.trace || nt.trace->rows.size() < 2) throw RangeOutsideTrace("trace " + nt.name + " is empty");
    const auto& rows = nt.trace->rows;
    if (range.t0 < rows.front().t - 1e-9 || range.t1 > rows.back().t + 1e-9)
      throw RangeOutsideTrace("range " + num(range.t0) + ":" + num(range.t1) + " outside trace " + nt.name);
  }
}

std::vector<std::pair<double, double>> extract(const ControlTrace& trace, const Window& range,
                                               const std::function<double(const TraceRow&)>& f) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : trace.rows)
    if (row.t >= range.t0 - 1e-9 && row.t <= range.t1 + 1e-9) pts.emplace_back(row.t, f(row));
  return pts;
}

std::string render(const std::vector<Series>& series, const Window& range, const std::string& title,
                   const std::string& y_label) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series)
    for (const auto& [t, v] : s.points)
      if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  if (!(hi >= lo)) lo = -1, hi = 1;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double t) { return kLeft + (t - range.t0) / (range.t1 - range.t0) * pw; };
  auto Y = [&](double v) { return kTop + (hi - std::clamp(v, lo, hi)) / (hi - lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\">" + escape(title) + "</text>\n";
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = range.t0 + (range.t1 - range.t0) * i / 4.0;
    const double v = lo + (hi - lo) * i / 4.0;
    svg += "<text x=\"" + num(X(t)) + "\" y=\"" + num(kHeight - kBottom + 18) + "\" text-anchor=\"middle\">" +
           num(t) + "</text>\n";
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(Y(v) + 4) + "\" text-anchor=\"end\">" + num(v) +
           "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 8) + "\" text-anchor=\"middle\">t [s]</text>\n";
  svg += "<text x=\"14\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         num(kTop + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\"";
    if (s.dashed) svg += " stroke-dasharray=\"5,3\"";
    svg += " points=\"";
    for (const auto& [t, v] : s.points) svg += num(X(t)) + "," + num(Y(v)) + " ";
    svg += "\"/>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(i);
    svg += "<line x1=\"" + num(kLeft + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(kLeft + 30) + "\" y2=\"" +
           num(ly - 4) + "\" stroke=\"" + s.color + "\"/>\n";
    svg += "<text x=\"" + num(kLeft + 36) + "\" y=\"" + num(ly) + "\">" + escape(s.name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string range_tag(const Window& w) { return num(w.t0) + "_" + num(w.t1); }

}  // namespace

std::string render_tracking_svg(const std::vector<NamedTrace>& traces, const Window& range) {
  check_range(traces, range);
  std::vector<Series> series;
  if (!traces.empty())
    series.push_back({"reference", "black", extract(*traces.front().trace, range, [](auto& r) { return r.r; }), true});
  for (std::size_t i = 0; i < traces.size(); ++i)
    series.push_back({traces[i].name, kColors[i % 5], extract(*traces[i].trace, range, [](auto& r) { return r.y; })});
  return render(series, range, "Reference and output, " + num(range.t0) + " to " + num(range.t1) + " s", "y");
}

std::string render_error_svg(const std::vector<NamedTrace>& traces, const Window& range) {
  check_range(traces, range);
  std::vector<Series> series;
  for (std::size_t i = 0; i < traces.size(); ++i)
    series.push_back({traces[i].name, kColors[i % 5],
                      extract(*traces[i].trace, range, [](auto& r) { return std::abs(r.e); })});
  return render(series, range, "Absolute error, " + num(range.t0) + " to " + num(range.t1) + " s", "|e|");
}

std::vector<std::filesystem::path> emit_plots(const std::vector<NamedTrace>& traces, const std::vector<Window>& ranges,
                                              const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> files;
  if (ranges.empty()) return files;
  std::filesystem::create_directories(directory);
  for (const auto& w : ranges) {
    const auto tracking = directory / ("tracking_" + range_tag(w) + ".svg");
    const auto error = directory / ("abs_error_" + range_tag(w) + ".svg");
    std::ofstream(tracking, std::ios::binary) << render_tracking_svg(traces, w);
    std::ofstream(error, std::ios::binary) << render_error_svg(traces, w);
    files.push_back(tracking);
    files.push_back(error);
  }
  return files;
}

}  // namespace nnac
