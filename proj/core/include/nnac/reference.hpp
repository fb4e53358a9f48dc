#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace nnac {

enum class ReferenceKind { sine, filtered_square, ramped_square };

std::string_view to_string(ReferenceKind kind);
ReferenceKind reference_kind_from_string(std::string_view name);

/// One segment of the reference signal, active on [t_start, t_end).
struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::sine;
  double amplitude = 1.0;
  double angular_frequency = 0.78539816339744830962;  // pi/4 rad/s
  double period = 4.0;
  double low = -0.4;
  double high = 0.4;
  double filter_time_constant = 0.025;
  double ramp_duration = 0.5;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Exact zero-order-hold discretisation of 1/(tau s + 1).
double filter_step(double y_f, double u_f, double Ts, double tau);

/// Unfiltered value of a segment at absolute time t. `entry_level` is the value
/// the first ramp of a ramped square starts from.
double raw_reference(const ReferenceSpec& spec, double t, double entry_level = 0.0);

/// Piecewise reference generator sampled at a fixed step.
///
/// Square segments pass through the first-order filter; its state carries
/// over from the previous segment so segment boundaries do not kick it.
/// The last segment is closed at its end so the final sample of a run is
/// covered.
class ReferenceSignal {
 public:
  ReferenceSignal(std::vector<ReferenceSpec> segments, double Ts);

  /// Reference at time t; calls must use non-decreasing t on the Ts grid.
  /// Throws OutOfWindow when no segment covers t.
  double sample(double t);

  const std::vector<ReferenceSpec>& segments() const { return segments_; }
  /// Index of the segment covering t, if any.
  std::optional<std::size_t> segment_index(double t) const;

 private:
  std::vector<ReferenceSpec> segments_;
  double Ts_;
  double filter_state_ = 0.0;
  double last_value_ = 0.0;
  std::optional<std::size_t> active_;
  double entry_level_ = 0.0;
};

}  // namespace nnac
