#pragma once

#include <cstdint>

#include "nnac/linalg.hpp"
#include "nnac/rng.hpp"

namespace nnac::ann {

/// Annealing schedule of the winner-takes-most neighbourhood.
///
///   h(k, r) = l(k) exp(-r^2 / (2 xi(k)^2))
///   l(k)    = l0 exp(-k / K_L)
///   xi(k)   = xi0 (xi_f / xi0)^(k / K_L)
struct SomSchedule {
  double l0 = 5e-5;
  double xi0 = 7e-5;
  double xi_f = 5e-5;
  double max_samples = 1.0;  // K_L

  void validate() const;
};

/// Self-organising layer on a 1-D neuron line.
///
/// Column j of `weights` is the prototype of neuron j, so the layer also acts
/// as a tanh dense layer (inputs x neurons) in the forward pass.
struct SomLayer {
  Matrix weights;
  SomSchedule schedule;

  Index inputs() const { return weights.rows(); }
  Index neurons() const { return weights.cols(); }

  static SomLayer random(Index inputs, Index neurons, const SomSchedule& schedule, Rng& rng);
};

double som_learning_rate(const SomSchedule& s, double k);
double som_radius(const SomSchedule& s, double k);
double som_neighborhood(const SomSchedule& s, double k, double grid_distance);

/// Neuron whose prototype is closest in Euclidean distance; ties go to the
/// lowest index.
Index som_winner(const SomLayer& layer, const Vector& x);

/// Moves every prototype toward x by its neighbourhood weight and returns the
/// winner: W_j += h(k, |j - winner|) (x - W_j).
Index som_update(SomLayer& layer, const Vector& x, std::int64_t k);

/// tanh(x . W), the layer's contribution to the feature cascade.
Vector som_forward(const SomLayer& layer, const Vector& x);

}  // namespace nnac::ann
