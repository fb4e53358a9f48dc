#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nnac/metrics.hpp"

namespace nnac {

struct NamedTrace {
  std::string name;
  const ControlTrace* trace = nullptr;
};

/// Static SVG line chart of the reference and each controller's output over
/// [range.t0, range.t1]. Throws RangeOutsideTrace.
std::string render_tracking_svg(const std::vector<NamedTrace>& traces, const Window& range);
/// |e| of each controller over the range.
std::string render_error_svg(const std::vector<NamedTrace>& traces, const Window& range);

/// Two files per range (tracking_<t0>_<t1>.svg, abs_error_<t0>_<t1>.svg).
std::vector<std::filesystem::path> emit_plots(const std::vector<NamedTrace>& traces,
                                              const std::vector<Window>& ranges,
                                              const std::filesystem::path& directory);

}  // namespace nnac
