#pragma once

#include <cstdint>
#include <vector>

#include "nnac/ampc/armijo.hpp"
#include "nnac/ampc/problem.hpp"
#include "nnac/ann/elman.hpp"

namespace nnac::ampc {

enum class StopReason { increment_tolerance, error_tolerance, iteration_cap, failed };

struct NplptResult {
  double u = 0.0;  // applied control, clamped
  Vector U;        // final control trajectory over the control horizon
  int iterations = 0;
  /// Internal iteration whose U was final (iterations - 1 when the increment
  /// test fired, since that test compares against the previous iterate).
  int settled_iteration = 0;
  StopReason reason = StopReason::iteration_cap;
  std::vector<double> increment_norms;  // ||U^i - U^(i-1)||_inf per iteration
  bool softened = false;
};

/// One receding-horizon step of nonlinear prediction with repeated
/// linearisation along the predicted trajectory. The setpoint is held over
/// the horizon. On a prediction or QP failure the previous control is held.
NplptResult nplpt_step(const ann::ElmanModel& model, double y_sp, double y_measured,
                       double u_prev, const MpcProblem& problem);

struct OnlineAdaptation {
  double error_before = 0.0;
  double error_after = 0.0;
  double step = 0.0;
  bool skipped = false;
};

/// One Armijo gradient step on 1/2 (y - y_hat)^2 for a single sample
/// (input x, previous context), with the context treated as a constant.
OnlineAdaptation adapt_sample(ann::ElmanModel& model, const Vector& x, const Vector& context_prev,
                              double y_measured, const ArmijoParams& armijo);

struct AmpcConfig {
  MpcProblem mpc;
  ArmijoParams online_armijo;
  bool adapt_online = true;
};

/// Closed-loop AMPC controller owning its adaptive Elman model.
///
/// Per step: adapt the model on the newest (input, output) pair, run
/// nplpt_step from the refreshed context, then advance the model with the
/// applied control.
class AmpcController {
 public:
  AmpcController(ann::ElmanModel model, AmpcConfig config);

  double step(double y_sp, double y_measured);

  const ann::ElmanModel& model() const { return model_; }
  const AmpcConfig& config() const { return config_; }
  const NplptResult& last_result() const { return last_; }
  double last_control() const { return u_prev_; }
  std::size_t failures() const { return failures_; }
  std::size_t skipped_adaptations() const { return skipped_; }
  std::size_t softened_steps() const { return softened_; }

 private:
  Vector model_input(double u_delayed, double y_measured) const;

  ann::ElmanModel model_;
  AmpcConfig config_;
  double u_prev_ = 0.0;
  bool has_sample_ = false;
  Vector x_prev_;
  Vector context_prev_;
  NplptResult last_;
  std::size_t failures_ = 0;
  std::size_t skipped_ = 0;
  std::size_t softened_ = 0;
};

}  // namespace nnac::ampc
