#include "nnac/ann/drnn.hpp"

#include "nnac/ann/dense.hpp"

namespace nnac::ann {

DrnnModel DrnnModel::random(Index inputs, Index hidden, Rng& rng) {
  DrnnModel m;
  m.input_weights = rng.uniform_matrix(hidden, inputs, -kInitWeightBound, kInitWeightBound);
  m.diagonal_weights = rng.uniform_vector(hidden, -kInitWeightBound, kInitWeightBound);
  m.output_weights = rng.uniform_vector(hidden, -kInitWeightBound, kInitWeightBound);
  m.hidden = rng.uniform_vector(hidden, -kInitWeightBound, kInitWeightBound);
  return m;
}

DrnnEvaluation drnn_evaluate(const DrnnModel& model, const Vector& hidden_prev, const Vector& u) {
  check_width(model.inputs(), u.size(), "drnn_forward");
  check_width(model.hidden_size(), hidden_prev.size(), "drnn_forward state");
  DrnnEvaluation out;
  out.hidden = (model.input_weights * u + model.diagonal_weights.cwiseProduct(hidden_prev))
                   .array()
                   .tanh()
                   .matrix();
  out.y = model.output_weights.dot(out.hidden);
  return out;
}

double drnn_forward(DrnnModel& model, const Vector& u) {
  auto eval = drnn_evaluate(model, model.hidden, u);
  model.hidden = std::move(eval.hidden);
  return eval.y;
}

}  // namespace nnac::ann
