#pragma once

#include "nnac/linalg.hpp"
#include "nnac/rng.hpp"

namespace nnac::ann {

/// Linear layer trained by Hebb's rule with forgetting:
///   W' = W + gamma x y^T - delta W diag(y)
/// where y is the layer's previous output.
struct HebbianLayer {
  Matrix weights;  // inputs x outputs
  double gamma = 1e-4;
  double delta = 1e-6;

  Index inputs() const { return weights.rows(); }
  Index outputs() const { return weights.cols(); }

  static HebbianLayer random(Index inputs, Index outputs, double gamma, double delta, Rng& rng);
};

Vector hebbian_forward(const HebbianLayer& layer, const Vector& x);
void hebbian_update(HebbianLayer& layer, const Vector& x, const Vector& y_prev);

}  // namespace nnac::ann
