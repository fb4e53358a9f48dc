#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nnac/ann/dense.hpp"
#include "nnac/ann/drnn.hpp"
#include "nnac/ann/hebbian.hpp"
#include "nnac/ann/som.hpp"
#include "nnac/linalg.hpp"
#include "nnac/rng.hpp"

namespace nnac::hdlnnc {

/// Lyapunov coefficients of the MLFFNN learning rate.
struct LyapunovCoefficients {
  double alpha = 9e-2;
  double beta = 9e-1;
  double phi = 1e-1;
};

struct HdlnncConfig {
  Index som_width = 10;                     // neurons in each SOM layer
  Index feature_width = 3;                  // Hebbian layer outputs
  std::vector<Index> mlffnn_hidden{10, 5};  // tanh layers, then one linear output
  LyapunovCoefficients lyapunov;
  ann::SomSchedule som;
  double hebbian_gamma = 1e-4;
  double hebbian_delta = 1e-6;
  std::optional<double> cv_limit;  // symmetric saturation of CV
  Index drnn_hidden = 10;

  void validate() const;
};

/// Learning rate eta = alpha / (phi (1 + (beta/phi) g^2)) for gradient g of the
/// control error with respect to one weight. Lies in (0, alpha/phi].
double adaptive_rate(const LyapunovCoefficients& c, double de_dw);

/// Outcome of a gradient update that may be skipped on non-finite values.
enum class UpdateStatus { applied, skipped_non_finite };

/// Forward pass intermediates of the MLFFNN stage.
struct MlffnnPass {
  std::vector<Vector> activations;  // input first, CV-layer output last
  double cv = 0.0;
};

/// Hybrid deep learning controller: SOM -> SOM -> Hebbian feature cascade
/// feeding a feed-forward network trained with Lyapunov-derived rates.
class HdlnncController {
 public:
  HdlnncController(const HdlnncConfig& config, Rng& rng);

  /// Error feature vector [e, de, d2e] for a new error sample. Does not
  /// modify the stored history.
  Vector error_features(double e_con) const;

  /// Updates both SOM layers and the Hebbian layer for input features x.
  void hdl_learn(const Vector& x, std::int64_t k);

  /// HDL stage output f(f(x W1) W2) W3.
  Vector hdl_forward(const Vector& x) const;

  /// Pushes e_con into the error history and returns the control variable.
  /// Throws NonFiniteOutput.
  double control(double e_con);

  /// Gradient step on every MLFFNN weight using the last forward pass.
  UpdateStatus mlffnn_update(double e_con, double plant_jacobian);

  /// dCV/dW for every MLFFNN layer, from the last forward pass.
  std::vector<Matrix> cv_gradients() const;

  /// Full MLFFNN forward on arbitrary features; used for checks.
  MlffnnPass mlffnn_forward(const Vector& features) const;

  const HdlnncConfig& config() const { return config_; }
  std::vector<ann::DenseLayer>& mlffnn() { return mlffnn_; }
  const std::vector<ann::DenseLayer>& mlffnn() const { return mlffnn_; }
  ann::SomLayer& som1() { return som1_; }
  ann::SomLayer& som2() { return som2_; }
  ann::HebbianLayer& hebbian() { return hebbian_; }
  const Vector& last_hdl_output() const { return hdl_output_; }
  double last_cv() const { return last_cv_; }
  std::size_t skipped_updates() const { return skipped_; }

 private:
  HdlnncConfig config_;
  ann::SomLayer som1_;
  ann::SomLayer som2_;
  ann::HebbianLayer hebbian_;
  std::vector<ann::DenseLayer> mlffnn_;
  double e1_ = 0.0;  // e(k-1)
  double e2_ = 0.0;  // e(k-2)
  Vector hdl_output_;
  MlffnnPass last_pass_;
  double last_cv_ = 0.0;
  std::size_t skipped_ = 0;
};

/// Online DRNN process model supplying the plant Jacobian estimate.
///
/// Inputs are [CV(k-1), PV(k-1)], target PV(k).
class DrnnOnlineModel {
 public:
  DrnnOnlineModel(Index hidden, Rng& rng);
  explicit DrnnOnlineModel(ann::DrnnModel model);

  struct Rates {
    double output = 0.0;
    double diagonal = 0.0;
    double input = 0.0;
  };

  struct Update {
    double e_mod = 0.0;
    double jacobian = 0.0;
    UpdateStatus status = UpdateStatus::applied;
  };

  /// Trains on (cv, pv) where cv was applied one step before pv was read.
  Update update(double cv_prev, double pv);

  double jacobian() const { return jacobian_; }
  const ann::DrnnModel& model() const { return model_; }
  ann::DrnnModel& model() { return model_; }
  std::size_t skipped_updates() const { return skipped_; }

 private:
  ann::DrnnModel model_;
  double pv_prev_ = 0.0;
  double jacobian_ = 0.0;
  std::size_t skipped_ = 0;
};

/// Rates 2/N_h, 2/(N_h max|W_O|^2), 2/(N_h max|W_O|^2 max|I|^2) with I the
/// current network input; a zero maximum is replaced by 1.
DrnnOnlineModel::Rates drnn_rates(const ann::DrnnModel& model, const Vector& input);

/// One gradient step on 1/2 e_mod^2 from an explicit previous hidden state;
/// does not advance the model state. Returns e_mod before the step.
double drnn_train_step(ann::DrnnModel& model, const Vector& hidden_prev, const Vector& u,
                       double target, UpdateStatus* status = nullptr);

/// d y / d u_0 of one DRNN step from hidden_prev at input u.
double drnn_input_jacobian(const ann::DrnnModel& model, const Vector& hidden_prev, const Vector& u);

/// Full closed-loop step in the fixed order: DRNN update, HDL learning,
/// control computation, MLFFNN update.
class HdlnncLoop {
 public:
  HdlnncLoop(const HdlnncConfig& config, Rng& rng);

  /// Returns CV(k) for setpoint r and measured output pv.
  double step(double r, double pv);

  HdlnncController& controller() { return controller_; }
  DrnnOnlineModel& model() { return model_; }
  std::int64_t steps() const { return k_; }
  /// e_mod of the DRNN update in the latest step.
  double last_model_error() const { return e_mod_; }

 private:
  HdlnncController controller_;
  DrnnOnlineModel model_;
  double cv_prev_ = 0.0;
  double e_mod_ = 0.0;
  std::int64_t k_ = 0;
};

}  // namespace nnac::hdlnnc
