#include "nnac/ann/hebbian.hpp"

#include "nnac/ann/dense.hpp"

namespace nnac::ann {

HebbianLayer HebbianLayer::random(Index inputs, Index outputs, double gamma, double delta, Rng& rng) {
  return {rng.uniform_matrix(inputs, outputs, -kInitWeightBound, kInitWeightBound), gamma, delta};
}

Vector hebbian_forward(const HebbianLayer& layer, const Vector& x) {
  check_width(layer.inputs(), x.size(), "hebbian_forward");
  return layer.weights.transpose() * x;
}

void hebbian_update(HebbianLayer& layer, const Vector& x, const Vector& y_prev) {
  check_width(layer.inputs(), x.size(), "hebbian_update input");
  check_width(layer.outputs(), y_prev.size(), "hebbian_update output");
  // forgetting term first: it uses W(k), not the Hebb-updated weights
  const Matrix decay = layer.delta * (layer.weights * y_prev.asDiagonal());
  layer.weights += layer.gamma * x * y_prev.transpose();
  layer.weights -= decay;
}

}  // namespace nnac::ann
