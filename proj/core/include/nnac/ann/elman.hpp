#pragma once

#include <cstddef>

#include "nnac/ann/dense.hpp"
#include "nnac/linalg.hpp"
#include "nnac/plant.hpp"
#include "nnac/rng.hpp"

namespace nnac::ann {

/// Elman network with a full context (hidden-to-hidden) feedback.
///
/// Input channel 0 is the control channel; it passes through a delay line of
/// `input_delay` steps before entering the net. Any further channels (the
/// measured-output feedback of a series-parallel model) enter undelayed.
///
///   h(k) = f(W_in x(k) + W_ctx h(k-1)),   y(k) = W_out . h(k)
struct ElmanModel {
  Matrix input_weights;    // hidden x inputs
  Matrix context_weights;  // hidden x hidden
  Vector output_weights;   // hidden
  Vector context;          // h(k-1)
  Activation activation = Activation::tanh;
  DelayLine control_delay;

  ElmanModel() = default;
  ElmanModel(Index inputs, Index hidden, std::size_t input_delay = 0);

  Index inputs() const { return input_weights.cols(); }
  Index hidden_size() const { return output_weights.size(); }
  std::size_t input_delay() const { return control_delay.length(); }
  bool has_output_feedback() const { return inputs() > 1; }

  /// Output the model currently predicts, W_out . context.
  double output() const { return output_weights.dot(context); }

  /// Weights and initial context uniform in (-0.1, 0.1).
  static ElmanModel random(Index inputs, Index hidden, std::size_t input_delay, Rng& rng);
};

struct ElmanEvaluation {
  Vector hidden;
  double y = 0.0;
};

/// One cell evaluation on an already-delayed input vector.
ElmanEvaluation elman_cell(const ElmanModel& model, const Vector& context, const Vector& x);

/// Pushes the control channel through the delay line, evaluates the cell and
/// stores the new context.
double elman_forward(ElmanModel& model, const Vector& u_in);

/// Flattened trainable parameters: W_in, W_ctx (column-major), W_out.
Vector elman_parameters(const ElmanModel& model);
void set_elman_parameters(ElmanModel& model, const Vector& params);
Index elman_parameter_count(const ElmanModel& model);

}  // namespace nnac::ann
