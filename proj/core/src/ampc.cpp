#include "nnac/ampc/controller.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "nnac/ampc/prediction.hpp"
#include "nnac/ampc/qp.hpp"
#include "nnac/errors.hpp"

namespace nnac::ampc {

NplptResult nplpt_step(const ann::ElmanModel& model, double y_sp, double y_measured, double u_prev,
                       const MpcProblem& problem) {
  NplptResult res;
  const Index nu = problem.Nu;
  const Vector Ysp = Vector::Constant(problem.N, y_sp);
  const Matrix J = lower_triangular_ones(nu);
  Vector U = Vector::Constant(nu, u_prev);  // U^0
  try {
    for (int i = 1; i <= problem.max_internal_iters; ++i) {
      const auto lin = linearize_trajectory(model, U, y_measured, problem.N);
      if (i > 1 && (Ysp - lin.y_pred).squaredNorm() / static_cast<double>(problem.N) < problem.err_tol) {
        res.reason = StopReason::error_tolerance;
        res.settled_iteration = i - 1;
        break;
      }
      const auto qp = solve_qp(lin, Ysp, problem, u_prev);
      res.softened = res.softened || qp.output_softened;
      const Vector next = J * qp.du + Vector::Constant(nu, u_prev);
      const double increment = (next - U).lpNorm<Eigen::Infinity>();
      res.increment_norms.push_back(increment);
      res.iterations = i;
      U = next;
      if (increment < problem.du_tol) {
        res.reason = StopReason::increment_tolerance;
        res.settled_iteration = i - 1;
        break;
      }
      res.settled_iteration = i;
    }
  } catch (const Error& e) {
    spdlog::warn("NPLPT step failed, holding the last control: {}", e.what());
    res.reason = StopReason::failed;
    res.U = Vector::Constant(nu, u_prev);
    res.u = u_prev;
    return res;
  }
  res.U = U;
  res.u = clamp_control(U(0), u_prev, problem);
  return res;
}

namespace {

double sample_loss(const ann::ElmanModel& model, const Vector& x, const Vector& context_prev,
                   double y) {
  const double e = y - ann::elman_cell(model, context_prev, x).y;
  return 0.5 * e * e;
}

}  // namespace

OnlineAdaptation adapt_sample(ann::ElmanModel& model, const Vector& x, const Vector& context_prev,
                              double y_measured, const ArmijoParams& armijo) {
  OnlineAdaptation out;
  const auto eval = ann::elman_cell(model, context_prev, x);
  const double e = y_measured - eval.y;
  out.error_before = std::abs(e);
  out.error_after = out.error_before;
  if (e == 0.0) return out;

  // gradient of 1/2 e^2, context held constant
  const Index hidden = model.hidden_size();
  Vector delta(hidden);
  for (Index j = 0; j < hidden; ++j)
    delta(j) = -e * model.output_weights(j) * ann::activation_slope(model.activation, eval.hidden(j));
  ann::ElmanModel grad_model = model;
  grad_model.input_weights = delta * x.transpose();
  grad_model.context_weights = delta * context_prev.transpose();
  grad_model.output_weights = -e * eval.hidden;
  const Vector g = ann::elman_parameters(grad_model);
  if (!g.allFinite()) {
    out.skipped = true;
    return out;
  }
  const Vector w = ann::elman_parameters(model);
  ann::ElmanModel trial = model;
  auto loss = [&](double eta) {
    ann::set_elman_parameters(trial, w - eta * g);
    return sample_loss(trial, x, context_prev, y_measured);
  };
  out.step = armijo_search(loss, g.squaredNorm(), armijo);
  if (out.step > 0.0) {
    ann::set_elman_parameters(model, w - out.step * g);
    out.error_after = std::abs(y_measured - ann::elman_cell(model, context_prev, x).y);
  }
  return out;
}

AmpcController::AmpcController(ann::ElmanModel model, AmpcConfig config)
    : model_(std::move(model)), config_(std::move(config)) {
  config_.mpc.validate();
  config_.online_armijo.validate();
  if (model_.inputs() < 1 || model_.inputs() > 2)
    throw ConfigError("AMPC model must have 1 or 2 inputs");
  if (config_.mpc.u_min > 0.0 || config_.mpc.u_max < 0.0)
    throw ConfigError("AMPC input box must contain the initial control 0");
}

Vector AmpcController::model_input(double u_delayed, double y_measured) const {
  Vector x(model_.inputs());
  x(0) = u_delayed;
  if (model_.has_output_feedback()) x(1) = y_measured;
  return x;
}

double AmpcController::step(double y_sp, double y_measured) {
  if (has_sample_ && config_.adapt_online) {
    const auto a = adapt_sample(model_, x_prev_, context_prev_, y_measured, config_.online_armijo);
    if (a.skipped && skipped_++ % 1000 == 0)
      spdlog::warn("AMPC: non-finite model gradient, adaptation skipped ({} so far)", skipped_);
    model_.context = ann::elman_cell(model_, context_prev_, x_prev_).hidden;
  }
  last_ = nplpt_step(model_, y_sp, y_measured, u_prev_, config_.mpc);
  if (last_.reason == StopReason::failed) ++failures_;
  if (last_.softened) ++softened_;
  const double u = last_.u;

  const double u_delayed = model_.control_delay.push(u);
  x_prev_ = model_input(u_delayed, y_measured);
  context_prev_ = model_.context;
  model_.context = ann::elman_cell(model_, context_prev_, x_prev_).hidden;
  has_sample_ = true;
  u_prev_ = u;
  return u;
}

}  // namespace nnac::ampc
