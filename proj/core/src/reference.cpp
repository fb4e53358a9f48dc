#include "nnac/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nnac/errors.hpp"

namespace nnac {

namespace {

constexpr double kTimeSlack = 1e-9;

double square_level(const ReferenceSpec& s, double phase) {
  return phase < 0.5 * s.period ? s.high : s.low;
}

}  // namespace

std::string_view to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::sine: return "sine";
    case ReferenceKind::filtered_square: return "filtered_square";
    case ReferenceKind::ramped_square: return "ramped_square";
  }
  return "sine";
}

ReferenceKind reference_kind_from_string(std::string_view name) {
  if (name == "sine") return ReferenceKind::sine;
  if (name == "filtered_square") return ReferenceKind::filtered_square;
  if (name == "ramped_square") return ReferenceKind::ramped_square;
  throw ConfigError("unknown reference kind '" + std::string(name) + "'");
}

double filter_step(double y_f, double u_f, double Ts, double tau) {
  const double a = std::exp(-Ts / tau);
  return a * y_f + (1.0 - a) * u_f;
}

double raw_reference(const ReferenceSpec& spec, double t, double entry_level) {
  const double local = t - spec.t_start;
  switch (spec.kind) {
    case ReferenceKind::sine:
      return spec.amplitude * std::sin(spec.angular_frequency * t);
    case ReferenceKind::filtered_square: {
      const double phase = std::fmod(std::max(local, 0.0) + kTimeSlack, spec.period);
      return square_level(spec, phase);
    }
    case ReferenceKind::ramped_square: {
      // High on the first half period, low on the second; every edge is a
      // linear ramp that starts at the edge. The very first ramp starts from
      // entry_level instead of the low level.
      const double shifted = std::max(local, 0.0) + kTimeSlack;
      const double phase = std::fmod(shifted, spec.period);
      const double half = 0.5 * spec.period;
      const bool first_period = shifted < spec.period;
      const double ramp = std::min(spec.ramp_duration, half);
      if (phase < half) {
        const double from = first_period ? entry_level : spec.low;
        if (ramp > 0.0 && phase < ramp) return from + (spec.high - from) * (phase / ramp);
        return spec.high;
      }
      const double into = phase - half;
      if (ramp > 0.0 && into < ramp) return spec.high + (spec.low - spec.high) * (into / ramp);
      return spec.low;
    }
  }
  return 0.0;
}

ReferenceSignal::ReferenceSignal(std::vector<ReferenceSpec> segments, double Ts)
    : segments_(std::move(segments)), Ts_(Ts) {
  if (segments_.empty()) throw ConfigError("reference needs at least one segment");
  if (!(Ts_ > 0.0)) throw ConfigError("reference sample time must be positive");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.t_end > s.t_start)) throw ConfigError("reference segment has an empty window");
    if (s.kind == ReferenceKind::sine && !(s.amplitude > 0.0))
      throw ConfigError("sine reference amplitude must be positive");
    if (s.kind != ReferenceKind::sine) {
      if (!(s.period > 0.0)) throw ConfigError("square reference period must be positive");
      if (!(s.filter_time_constant > 0.0))
        throw ConfigError("square reference filter time constant must be positive");
      if (s.ramp_duration < 0.0) throw ConfigError("ramp duration must be non-negative");
    }
    if (i > 0 && std::abs(s.t_start - segments_[i - 1].t_end) > kTimeSlack)
      throw ConfigError("reference segments must be contiguous");
  }
}

std::optional<std::size_t> ReferenceSignal::segment_index(double t) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    const bool last = i + 1 == segments_.size();
    const bool after_start = t >= s.t_start - kTimeSlack;
    const bool before_end = last ? t <= s.t_end + kTimeSlack : t < s.t_end - kTimeSlack;
    if (after_start && before_end) return i;
  }
  return std::nullopt;
}

double ReferenceSignal::sample(double t) {
  const auto idx = segment_index(t);
  if (!idx) throw OutOfWindow("no reference segment covers t = " + std::to_string(t));
  const auto& spec = segments_[*idx];
  if (active_ != idx) {
    active_ = idx;
    entry_level_ = last_value_;
    filter_state_ = last_value_;
  }
  double value = raw_reference(spec, t, entry_level_);
  if (spec.kind != ReferenceKind::sine) {
    filter_state_ = filter_step(filter_state_, value, Ts_, spec.filter_time_constant);
    value = filter_state_;
  }
  last_value_ = value;
  return value;
}

}  // namespace nnac
