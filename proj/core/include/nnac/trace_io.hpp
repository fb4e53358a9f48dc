#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nnac/metrics.hpp"

namespace nnac {

/// Header line of every trace file.
inline constexpr const char* kTraceHeader = "k,t,r,y,u,e";

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const ControlTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const ControlTrace& trace);
/// Appends a marker line after a partial trace of an aborted run.
void write_error_marker(const std::filesystem::path& path, const std::string& message);

/// Parses a trace; lines starting with '#' are skipped. Throws ConfigError on
/// malformed input.
ControlTrace read_trace_csv(std::istream& in);
ControlTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace nnac
