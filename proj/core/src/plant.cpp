#include "nnac/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nnac/errors.hpp"

namespace nnac {

PlantStep plant_step(const PlantState& state, const PlantParams& params, double u,
                     InputInjection injection) {
  if (!std::isfinite(u)) throw NonFiniteOutput("plant_step: non-finite control input");
  const double denom = params.a3 + state.x1 * state.x1 + state.x2 * state.x2;
  if (std::abs(denom) < kSingularityGuard) {
    std::ostringstream msg;
    msg << "plant_step: singular denominator a3 + x1^2 + x2^2 = " << denom << " at k=" << state.k
        << " (x1=" << state.x1 << ", x2=" << state.x2 << ")";
    throw SingularDenominator(msg.str());
  }
  PlantStep out;
  switch (injection) {
    case InputInjection::additive_x1:
      out.state.x1 = params.a1 * state.x1 + params.a2 * state.x2 + u;
      break;
  }
  out.state.x2 = state.x1 / denom;
  out.state.k = state.k + 1;
  out.y = out.state.x1;
  return out;
}

DelayLine::DelayLine(std::size_t length) : buffer_(length, 0.0) {}

double DelayLine::push(double value) {
  if (buffer_.empty()) return value;
  const double out = buffer_[head_];
  buffer_[head_] = value;
  head_ = (head_ + 1) % buffer_.size();
  return out;
}

double DelayLine::front() const { return buffer_.empty() ? 0.0 : buffer_[head_]; }

std::vector<double> DelayLine::contents() const {
  std::vector<double> out;
  out.reserve(buffer_.size());
  for (std::size_t i = 0; i < buffer_.size(); ++i) out.push_back(buffer_[(head_ + i) % buffer_.size()]);
  return out;
}

void DelayLine::assign(const std::vector<double>& oldest_first) {
  buffer_ = oldest_first;
  head_ = 0;
}

void DelayLine::reset() {
  std::fill(buffer_.begin(), buffer_.end(), 0.0);
  head_ = 0;
}

ParamSchedule::ParamSchedule(std::vector<ParamSwitch> switches) : switches_(std::move(switches)) {
  if (switches_.empty()) throw ConfigError("parameter schedule is empty");
  if (switches_.front().switch_time != 0.0)
    throw ConfigError("parameter schedule must start at t = 0");
  for (std::size_t i = 1; i < switches_.size(); ++i)
    if (!(switches_[i].switch_time > switches_[i - 1].switch_time))
      throw ConfigError("parameter switch times must be strictly increasing");
}

PlantParams ParamSchedule::params_at(double t) const {
  // Sample times are k*Ts; absorb the rounding of that product.
  constexpr double slack = 1e-9;
  PlantParams p = switches_.front().params;
  for (const auto& s : switches_) {
    if (s.switch_time <= t + slack) p = s.params;
    else break;
  }
  return p;
}

}  // namespace nnac
