#include "nnac/ann/som.hpp"

#include <cmath>
#include <limits>

#include "nnac/ann/dense.hpp"
#include "nnac/errors.hpp"

namespace nnac::ann {

void SomSchedule::validate() const {
  if (!(l0 > 0.0 && l0 <= 1.0)) throw ConfigError("SOM l0 must lie in (0, 1]");
  if (!(xi_f > 0.0 && xi0 >= xi_f && xi0 <= 1.0))
    throw ConfigError("SOM radii need 0 < xi_f <= xi0 <= 1");
  if (!(max_samples > 0.0)) throw ConfigError("SOM K_L must be positive");
}

SomLayer SomLayer::random(Index inputs, Index neurons, const SomSchedule& schedule, Rng& rng) {
  return {rng.uniform_matrix(inputs, neurons, -kInitWeightBound, kInitWeightBound), schedule};
}

double som_learning_rate(const SomSchedule& s, double k) {
  return s.l0 * std::exp(-k / s.max_samples);
}

double som_radius(const SomSchedule& s, double k) {
  return s.xi0 * std::pow(s.xi_f / s.xi0, k / s.max_samples);
}

double som_neighborhood(const SomSchedule& s, double k, double grid_distance) {
  if (grid_distance == 0.0) return som_learning_rate(s, k);  // xi may underflow far past K_L
  const double xi = som_radius(s, k);
  return som_learning_rate(s, k) * std::exp(-(grid_distance * grid_distance) / (2.0 * xi * xi));
}

Index som_winner(const SomLayer& layer, const Vector& x) {
  check_width(layer.inputs(), x.size(), "som_winner");
  Index best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < layer.neurons(); ++j) {
    const double d2 = (layer.weights.col(j) - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

Index som_update(SomLayer& layer, const Vector& x, std::int64_t k) {
  const Index winner = som_winner(layer, x);
  const double kd = static_cast<double>(k);
  for (Index j = 0; j < layer.neurons(); ++j) {
    const double h = som_neighborhood(layer.schedule, kd, static_cast<double>(j - winner));
    if (h == 0.0) continue;
    layer.weights.col(j) += h * (x - layer.weights.col(j));
  }
  return winner;
}

Vector som_forward(const SomLayer& layer, const Vector& x) {
  check_width(layer.inputs(), x.size(), "som_forward");
  return (layer.weights.transpose() * x).array().tanh().matrix();
}

}  // namespace nnac::ann
