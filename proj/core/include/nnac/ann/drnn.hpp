#pragma once

#include "nnac/linalg.hpp"
#include "nnac/rng.hpp"

namespace nnac::ann {

/// Diagonal recurrent network: one tanh hidden layer whose only recurrence is
/// a self-loop per neuron, linear scalar output.
///
///   s_j(k) = tanh(sum_i I_ji u_i(k) + D_j s_j(k-1))
///   y(k)   = sum_j O_j s_j(k)
struct DrnnModel {
  Matrix input_weights;     // hidden x inputs
  Vector diagonal_weights;  // hidden
  Vector output_weights;    // hidden
  Vector hidden;            // s(k-1)

  Index inputs() const { return input_weights.cols(); }
  Index hidden_size() const { return output_weights.size(); }

  /// Weights and initial hidden state uniform in (-0.1, 0.1).
  static DrnnModel random(Index inputs, Index hidden, Rng& rng);
};

struct DrnnEvaluation {
  Vector hidden;  // s(k)
  double y = 0.0;
};

/// Evaluates one step from an explicit previous hidden state.
DrnnEvaluation drnn_evaluate(const DrnnModel& model, const Vector& hidden_prev, const Vector& u);

/// Evaluates one step and advances the model's hidden state.
double drnn_forward(DrnnModel& model, const Vector& u);

}  // namespace nnac::ann
