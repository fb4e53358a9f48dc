#pragma once

#include <cmath>
#include <string_view>

#include "nnac/linalg.hpp"
#include "nnac/rng.hpp"

namespace nnac::ann {

enum class Activation { tanh, linear };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

inline double activate(Activation a, double z) {
  return a == Activation::tanh ? std::tanh(z) : z;
}

/// Derivative of the activation expressed through its output value.
inline double activation_slope(Activation a, double out) {
  return a == Activation::tanh ? 1.0 - out * out : 1.0;
}

Vector activate(Activation a, const Vector& z);

/// Fully connected layer without bias: out = f(x . W), W is inputs x outputs.
struct DenseLayer {
  Matrix weights;
  Activation activation = Activation::tanh;

  Index inputs() const { return weights.rows(); }
  Index outputs() const { return weights.cols(); }

  static DenseLayer random(Index inputs, Index outputs, Activation activation, Rng& rng);
};

/// Throws DimensionMismatch if x.size() != layer.inputs().
Vector dense_forward(const DenseLayer& layer, const Vector& x);

/// d out / d x, outputs x inputs.
Matrix dense_jacobian(const DenseLayer& layer, const Vector& x);

void check_width(Index expected, Index actual, const char* what);

}  // namespace nnac::ann
