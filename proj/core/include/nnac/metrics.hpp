#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nnac {

struct TraceRow {
  std::int64_t k = 0;
  double t = 0.0;
  double r = 0.0;
  double y = 0.0;
  double u = 0.0;
  double e = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Per-step closed-loop record, e = r - y on every row.
struct ControlTrace {
  std::vector<TraceRow> rows;

  void append(std::int64_t k, double t, double r, double y, double u) {
    rows.push_back({k, t, r, y, u, r - y});
  }
  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
};

struct Window {
  double t0 = 0.0;
  double t1 = 0.0;

  friend bool operator==(const Window&, const Window&) = default;
};

struct Icqi {
  double iae = 0.0;
  double ise = 0.0;
  double itae = 0.0;
};

/// IAE, ISE and ITAE over [t0, t1] by the trapezoidal rule, with t measured
/// from the start of the run. Only sample intervals lying inside the window
/// contribute, so adjacent windows add up. Throws EmptyWindow.
Icqi icqi(const ControlTrace& trace, const Window& window);

struct IcqiEntry {
  Window window;
  std::string controller;
  Icqi values;
};

struct IcqiReport {
  std::vector<IcqiEntry> entries;
};

void to_json(nlohmann::json& j, const IcqiReport& report);
void from_json(const nlohmann::json& j, IcqiReport& report);

}  // namespace nnac
