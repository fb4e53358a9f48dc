#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nnac {

/// Constants A1, A2, A3 of the benchmark process.
struct PlantParams {
  double a1 = 0.2;
  double a2 = 0.8;
  double a3 = 1.1;

  friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

struct PlantState {
  double x1 = 0.0;
  double x2 = 0.0;
  std::int64_t k = 0;
};

/// Where the control signal enters the state update.
enum class InputInjection { additive_x1 };

struct PlantStep {
  PlantState state;
  double y = 0.0;
};

/// |a3 + x1^2 + x2^2| below this aborts the step.
inline constexpr double kSingularityGuard = 1e-12;

/// One step of
///   x1' = a1 x1 + a2 x2 + u
///   x2' = x1 / (a3 + x1^2 + x2^2)
///   y   = x1'
/// Throws SingularDenominator near the singular manifold of the x2 update.
PlantStep plant_step(const PlantState& state, const PlantParams& params, double u,
                     InputInjection injection = InputInjection::additive_x1);

/// Fixed-length FIFO delaying a scalar signal by `length` pushes; zero filled.
class DelayLine {
 public:
  explicit DelayLine(std::size_t length = 0);

  /// Pushes `value` and returns the value pushed `length` calls earlier.
  double push(double value);

  std::size_t length() const { return buffer_.size(); }
  /// Value that `push` returns next, without advancing.
  double front() const;
  /// Stored values, oldest first.
  std::vector<double> contents() const;
  void assign(const std::vector<double>& oldest_first);
  void reset();

 private:
  std::vector<double> buffer_;
  std::size_t head_ = 0;
};

/// A set of plant constants that takes effect at `switch_time` seconds.
struct ParamSwitch {
  double switch_time = 0.0;
  PlantParams params;
};

class ParamSchedule {
 public:
  ParamSchedule() = default;
  /// Switch times must start at 0 and be strictly increasing.
  explicit ParamSchedule(std::vector<ParamSwitch> switches);

  /// Parameters of the latest switch with switch_time <= t (right-continuous).
  PlantParams params_at(double t) const;

  const std::vector<ParamSwitch>& switches() const { return switches_; }

 private:
  std::vector<ParamSwitch> switches_;
};

}  // namespace nnac
