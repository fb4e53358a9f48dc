#pragma once

#include "nnac/ampc/problem.hpp"
#include "nnac/ann/elman.hpp"

namespace nnac::ampc {

/// Constant output-disturbance estimate y_measured - W_out . context.
double output_correction(const ann::ElmanModel& model, double y_measured);

/// Rolls a copy of the model N steps along U from its current context and
/// returns y(k+1..k+N) plus the output correction. Series-parallel models
/// feed back y_measured first, then their own corrected predictions.
/// Throws NonFinitePrediction.
Vector predict_trajectory(const ann::ElmanModel& model, const Vector& U, double y_measured,
                          Index N);

/// H[p][q] = d y(k+p+1) / d u(k+q), by forward sensitivity propagation through
/// the same rollout. Throws NonFiniteSensitivity.
Matrix sensitivity_matrix(const ann::ElmanModel& model, const Vector& U, double y_measured,
                          Index N);

/// Prediction and sensitivity from one rollout.
TrajectoryLinearization linearize_trajectory(const ann::ElmanModel& model, const Vector& U,
                                             double y_measured, Index N);

}  // namespace nnac::ampc
