#include "nnac/metrics.hpp"

#include <cmath>

#include "nnac/errors.hpp"

namespace nnac {

namespace {
constexpr double kTimeSlack = 1e-9;
}

Icqi icqi(const ControlTrace& trace, const Window& window) {
  const auto& rows = trace.rows;
  if (rows.size() < 2) throw EmptyWindow("trace has fewer than 2 samples");
  if (!(window.t1 > window.t0)) throw EmptyWindow("window end must follow its start");
  if (window.t0 < rows.front().t - kTimeSlack || window.t1 > rows.back().t + kTimeSlack)
    throw EmptyWindow("window lies outside the trace span");
  Icqi out;
  std::size_t intervals = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    if (a.t < window.t0 - kTimeSlack) continue;
    if (b.t > window.t1 + kTimeSlack) break;
    const double dt = b.t - a.t;
    const double ea = std::abs(a.e), eb = std::abs(b.e);
    out.iae += 0.5 * dt * (ea + eb);
    out.ise += 0.5 * dt * (ea * ea + eb * eb);
    out.itae += 0.5 * dt * (a.t * ea + b.t * eb);
    ++intervals;
  }
  if (intervals == 0) throw EmptyWindow("no sample interval inside the window");
  return out;
}

void to_json(nlohmann::json& j, const IcqiReport& report) {
  j = nlohmann::json::array();
  for (const auto& e : report.entries) {
    j.push_back({{"window", {e.window.t0, e.window.t1}},
                 {"controller", e.controller},
                 {"iae", e.values.iae},
                 {"ise", e.values.ise},
                 {"itae", e.values.itae}});
  }
}

void from_json(const nlohmann::json& j, IcqiReport& report) {
  report.entries.clear();
  for (const auto& e : j) {
    IcqiEntry entry;
    entry.window = {e.at("window").at(0).get<double>(), e.at("window").at(1).get<double>()};
    entry.controller = e.at("controller").get<std::string>();
    entry.values = {e.at("iae").get<double>(), e.at("ise").get<double>(), e.at("itae").get<double>()};
    report.entries.push_back(std::move(entry));
  }
}

}  // namespace nnac
