#include "nnac/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "nnac/errors.hpp"

namespace nnac {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const ControlTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.k << ',' << format_double(r.t) << ',' << format_double(r.r) << ',' << format_double(r.y)
        << ',' << format_double(r.u) << ',' << format_double(r.e) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const ControlTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
  if (!out) throw Error("failed writing " + path.string());
}

void write_error_marker(const std::filesystem::path& path, const std::string& message) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot open " + path.string() + " for appending");
  std::string line = message;
  for (auto& c : line)
    if (c == '\n' || c == '\r') c = ' ';
  out << "# error: " << line << '\n';
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw ConfigError("trace line " + std::to_string(line) + ": bad field '" + std::string(field) + "'");
  return value;
}

}  // namespace

ControlTrace read_trace_csv(std::istream& in) {
  ControlTrace trace;
  std::string line;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kTraceHeader) throw ConfigError("unexpected trace header: " + line);
      header = true;
      continue;
    }
    std::string_view rest(line);
    std::string_view f[6];
    for (int i = 0; i < 6; ++i) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (i == 5))
        throw ConfigError("trace line " + std::to_string(n) + ": expected 6 fields");
      f[i] = rest.substr(0, comma);
      if (i < 5) rest.remove_prefix(comma + 1);
    }
    TraceRow row;
    row.k = parse_field<std::int64_t>(f[0], n);
    row.t = parse_field<double>(f[1], n);
    row.r = parse_field<double>(f[2], n);
    row.y = parse_field<double>(f[3], n);
    row.u = parse_field<double>(f[4], n);
    row.e = parse_field<double>(f[5], n);
    trace.rows.push_back(row);
  }
  if (!header) throw ConfigError("trace has no header");
  return trace;
}

ControlTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace " + path.string());
  return read_trace_csv(in);
}

}  // namespace nnac
