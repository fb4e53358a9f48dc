#include "nnac/ann/elman.hpp"

#include "nnac/errors.hpp"

namespace nnac::ann {

ElmanModel::ElmanModel(Index inputs, Index hidden, std::size_t input_delay)
    : input_weights(Matrix::Zero(hidden, inputs)),
      context_weights(Matrix::Zero(hidden, hidden)),
      output_weights(Vector::Zero(hidden)),
      context(Vector::Zero(hidden)),
      control_delay(input_delay) {}

ElmanModel ElmanModel::random(Index inputs, Index hidden, std::size_t input_delay, Rng& rng) {
  ElmanModel m(inputs, hidden, input_delay);
  m.input_weights = rng.uniform_matrix(hidden, inputs, -kInitWeightBound, kInitWeightBound);
  m.context_weights = rng.uniform_matrix(hidden, hidden, -kInitWeightBound, kInitWeightBound);
  m.output_weights = rng.uniform_vector(hidden, -kInitWeightBound, kInitWeightBound);
  m.context = rng.uniform_vector(hidden, -kInitWeightBound, kInitWeightBound);
  return m;
}

ElmanEvaluation elman_cell(const ElmanModel& model, const Vector& context, const Vector& x) {
  check_width(model.inputs(), x.size(), "elman_forward");
  check_width(model.hidden_size(), context.size(), "elman_forward context");
  ElmanEvaluation out;
  out.hidden = activate(model.activation, model.input_weights * x + model.context_weights * context);
  out.y = model.output_weights.dot(out.hidden);
  return out;
}

double elman_forward(ElmanModel& model, const Vector& u_in) {
  check_width(model.inputs(), u_in.size(), "elman_forward");
  Vector x = u_in;
  x(0) = model.control_delay.push(u_in(0));
  auto eval = elman_cell(model, model.context, x);
  model.context = std::move(eval.hidden);
  return eval.y;
}

Index elman_parameter_count(const ElmanModel& model) {
  return model.input_weights.size() + model.context_weights.size() + model.output_weights.size();
}

Vector elman_parameters(const ElmanModel& model) {
  Vector p(elman_parameter_count(model));
  Index o = 0;
  p.segment(o, model.input_weights.size()) = model.input_weights.reshaped();
  o += model.input_weights.size();
  p.segment(o, model.context_weights.size()) = model.context_weights.reshaped();
  o += model.context_weights.size();
  p.segment(o, model.output_weights.size()) = model.output_weights;
  return p;
}

void set_elman_parameters(ElmanModel& model, const Vector& params) {
  check_width(elman_parameter_count(model), params.size(), "set_elman_parameters");
  Index o = 0;
  model.input_weights.reshaped() = params.segment(o, model.input_weights.size());
  o += model.input_weights.size();
  model.context_weights.reshaped() = params.segment(o, model.context_weights.size());
  o += model.context_weights.size();
  model.output_weights = params.segment(o, model.output_weights.size());
}

}  // namespace nnac::ann
