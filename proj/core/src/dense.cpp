#include "nnac/ann/dense.hpp"

#include <string>

#include "nnac/errors.hpp"

namespace nnac::ann {

std::string_view to_string(Activation a) { return a == Activation::tanh ? "tanh" : "linear"; }

Activation activation_from_string(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "linear") return Activation::linear;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

Vector activate(Activation a, const Vector& z) {
  if (a == Activation::linear) return z;
  return z.array().tanh().matrix();
}

void check_width(Index expected, Index actual, const char* what) {
  if (expected != actual)
    throw DimensionMismatch(std::string(what) + ": expected width " + std::to_string(expected) +
                            ", got " + std::to_string(actual));
}

DenseLayer DenseLayer::random(Index inputs, Index outputs, Activation activation, Rng& rng) {
  return {rng.uniform_matrix(inputs, outputs, -kInitWeightBound, kInitWeightBound), activation};
}

Vector dense_forward(const DenseLayer& layer, const Vector& x) {
  check_width(layer.inputs(), x.size(), "dense_forward");
  return activate(layer.activation, layer.weights.transpose() * x);
}

Matrix dense_jacobian(const DenseLayer& layer, const Vector& x) {
  const Vector out = dense_forward(layer, x);
  Matrix jac = layer.weights.transpose();
  for (Index j = 0; j < out.size(); ++j) jac.row(j) *= activation_slope(layer.activation, out(j));
  return jac;
}

}  // namespace nnac::ann
