#include "nnac/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "nnac/errors.hpp"

namespace nnac {

namespace {

std::string cell(double v, bool best) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%11.4e%c", v, best ? '*' : ' ');
  return buf;
}

std::string window_label(const Window& w) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g:%g", w.t0, w.t1);
  return buf;
}

}  // namespace

std::string format_report_table(const IcqiReport& report, const std::vector<std::string>& controllers) {
  // Group entries by window, keeping first-seen order.
  std::vector<Window> windows;
  std::map<std::pair<std::size_t, std::string>, Icqi> cells;
  for (const auto& e : report.entries) {
    std::size_t wi = 0;
    while (wi < windows.size() && !(windows[wi] == e.window)) ++wi;
    if (wi == windows.size()) windows.push_back(e.window);
    cells[{wi, e.controller}] = e.values;
  }

  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-11s", "window");
  out += buf;
  for (const auto& c : controllers)
    for (const char* idx : {"IAE", "ISE", "ITAE"}) {
      std::snprintf(buf, sizeof buf, " %12s", (std::string(idx) + " " + c).substr(0, 12).c_str());
      out += buf;
    }
  out += '\n';

  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    std::snprintf(buf, sizeof buf, "%-11s", window_label(windows[wi]).c_str());
    out += buf;
    for (const auto& c : controllers) {
      const auto it = cells.find({wi, c});
      for (int idx = 0; idx < 3; ++idx) {
        if (it == cells.end()) {
          std::snprintf(buf, sizeof buf, " %12s", "-");
          out += buf;
          continue;
        }
        auto pick = [idx](const Icqi& v) { return idx == 0 ? v.iae : idx == 1 ? v.ise : v.itae; };
        const double mine = pick(it->second);
        bool best = controllers.size() > 1;
        for (const auto& other : controllers) {
          if (other == c) continue;
          const auto o = cells.find({wi, other});
          if (o != cells.end() && !(mine < pick(o->second))) best = false;
        }
        out += ' ' + cell(mine, best);
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> emit_report(const IcqiReport& report, const std::vector<std::string>& controllers,
                                               const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  const auto json_path = directory / "report.json";
  const auto text_path = directory / "report.txt";
  nlohmann::json j = report;
  std::ofstream js(json_path, std::ios::binary);
  std::ofstream txt(text_path, std::ios::binary);
  if (!js || !txt) throw Error("cannot write report into " + directory.string());
  js << j.dump(2) << '\n';
  txt << format_report_table(report, controllers);
  return {json_path, text_path};
}

}  // namespace nnac
