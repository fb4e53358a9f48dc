#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nnac/metrics.hpp"

namespace nnac {

/// Fixed-width table, one row per window: window, then IAE/ISE/ITAE for each
/// controller; '*' marks the smaller value of each index pair.
std::string format_report_table(const IcqiReport& report, const std::vector<std::string>& controllers);

/// Writes report.json and report.txt into `directory`; returns their paths.
std::vector<std::filesystem::path> emit_report(const IcqiReport& report,
                                               const std::vector<std::string>& controllers,
                                               const std::filesystem::path& directory);

}  // namespace nnac
