#pragma once

#include <cstddef>
#include <vector>

#include "nnac/ampc/armijo.hpp"
#include "nnac/ann/elman.hpp"
#include "nnac/plant.hpp"

namespace nnac::ampc {

/// Open-loop excitation used to initialise the Elman model: a sequence of
/// sines of the given amplitudes, each held for one segment.
struct PretrainSpec {
  std::vector<double> amplitudes{0.8, 0.6, 0.5};
  double angular_frequency = 0.78539816339744830962;
  double segment_duration = 8.0;
  double Ts = 0.01;
  std::size_t output_delay = 0;
  PlantParams plant;
  double mse_target = 1e-15;
  int max_passes = 5000;
  int memory = 10;  // quasi-Newton pairs kept
  ArmijoParams armijo;

  void validate() const;
};

/// Model inputs x(k) = [u(k-d), y(k)] (or [u(k-d)] without feedback) and
/// targets y(k+1), with y the delayed plant output.
struct TrainingData {
  Vector u;  // applied excitation, length T+1
  Vector y;  // measured output, length T+1
};

TrainingData excitation_data(const PretrainSpec& spec);

struct PretrainPass {
  double mse_before = 0.0;
  double mse_after = 0.0;
  double step = 0.0;
  double slope = 0.0;  // -g.d of the accepted direction
  bool steepest = false;
};

struct PretrainResult {
  ann::ElmanModel model;
  std::vector<double> mse_history;  // initial MSE, then one entry per pass
  std::vector<PretrainPass> passes;
  bool reached_target = false;
  bool budget_exhausted = false;
  double final_mse() const { return mse_history.empty() ? 0.0 : mse_history.back(); }
};

/// One-step-ahead MSE of the model over the data, starting from the model's
/// context with an empty delay line.
double sequence_mse(const ann::ElmanModel& model, const TrainingData& data);

/// MSE and its gradient with respect to elman_parameters(), by
/// backpropagation through time over the whole sequence.
double sequence_mse_gradient(const ann::ElmanModel& model, const TrainingData& data, Vector& grad);

/// Batch training with Armijo line search along limited-memory quasi-Newton
/// directions (steepest descent on restarts). Stops at mse_target, on
/// stagnation, or after max_passes (budget_exhausted).
PretrainResult pretrain_elman(ann::ElmanModel model, const PretrainSpec& spec);

}  // namespace nnac::ampc
