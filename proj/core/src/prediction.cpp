#include "nnac/ampc/prediction.hpp"

#include <algorithm>
#include <vector>

#include "nnac/errors.hpp"

namespace nnac::ampc {

namespace {

struct Rollout {
  Vector y;
  Matrix H;
};

Rollout rollout(const ann::ElmanModel& model, const Vector& U, double y_measured, Index N,
                bool with_sensitivity) {
  const Index nu = U.size();
  if (nu < 1 || N < 1) throw DimensionMismatch("prediction needs N >= 1 and a non-empty U");
  const bool feedback = model.has_output_feedback();
  if (model.inputs() != (feedback ? 2 : 1))
    throw DimensionMismatch("prediction supports models with 1 or 2 inputs");

  const double correction = output_correction(model, y_measured);
  const std::vector<double> past = model.control_delay.contents();  // u(k-D) .. u(k-1)
  const auto D = static_cast<Index>(past.size());
  const Index hidden = model.hidden_size();

  Rollout out;
  out.y.resize(N);
  if (with_sensitivity) out.H = Matrix::Zero(N, nu);

  Vector h = model.context;
  Matrix dh = Matrix::Zero(hidden, with_sensitivity ? nu : 0);
  double y_in = y_measured;
  Vector dy_in = Vector::Zero(with_sensitivity ? nu : 0);
  Vector x(model.inputs());
  Matrix dz;

  for (Index p = 0; p < N; ++p) {
    Index candidate = -1;
    if (p < D) {
      x(0) = past[static_cast<std::size_t>(p)];
    } else {
      candidate = std::min(p - D, nu - 1);
      x(0) = U(candidate);
    }
    if (feedback) x(1) = y_in;

    const Vector z = model.input_weights * x + model.context_weights * h;
    const Vector hn = ann::activate(model.activation, z);
    const double y = model.output_weights.dot(hn) + correction;
    out.y(p) = y;

    if (with_sensitivity) {
      dz = model.context_weights * dh;
      if (candidate >= 0) dz.col(candidate) += model.input_weights.col(0);
      if (feedback) dz += model.input_weights.col(1) * dy_in.transpose();
      for (Index j = 0; j < hidden; ++j) dz.row(j) *= ann::activation_slope(model.activation, hn(j));
      dh = dz;
      out.H.row(p) = model.output_weights.transpose() * dh;
      dy_in = out.H.row(p).transpose();
    }
    h = hn;
    y_in = y;
  }
  if (!out.y.allFinite()) throw NonFinitePrediction("Elman rollout produced a non-finite prediction");
  if (with_sensitivity && !out.H.allFinite())
    throw NonFiniteSensitivity("Elman rollout produced a non-finite sensitivity");
  return out;
}

}  // namespace

double output_correction(const ann::ElmanModel& model, double y_measured) {
  return y_measured - model.output();
}

Vector predict_trajectory(const ann::ElmanModel& model, const Vector& U, double y_measured, Index N) {
  return rollout(model, U, y_measured, N, false).y;
}

Matrix sensitivity_matrix(const ann::ElmanModel& model, const Vector& U, double y_measured, Index N) {
  return rollout(model, U, y_measured, N, true).H;
}

TrajectoryLinearization linearize_trajectory(const ann::ElmanModel& model, const Vector& U,
                                             double y_measured, Index N) {
  auto r = rollout(model, U, y_measured, N, true);
  return {std::move(r.y), std::move(r.H), U};
}

}  // namespace nnac::ampc
