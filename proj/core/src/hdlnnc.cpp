#include "nnac/hdlnnc.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "nnac/errors.hpp"

namespace nnac::hdlnnc {

void HdlnncConfig::validate() const {
  if (som_width < 1 || feature_width < 1) throw ConfigError("HDL layer widths must be positive");
  for (Index w : mlffnn_hidden)
    if (w < 1) throw ConfigError("MLFFNN hidden widths must be positive");
  if (!(lyapunov.phi > 0.0)) throw ConfigError("phi must be positive");
  if (!(lyapunov.alpha > 0.0 && lyapunov.beta > 0.0))
    throw ConfigError("alpha and beta must be positive");
  som.validate();
  if (!(hebbian_gamma > 0.0 && hebbian_gamma < 1.0 && hebbian_delta > 0.0 && hebbian_delta < 1.0))
    throw ConfigError("Hebbian gamma and delta must lie in (0, 1)");
  if (cv_limit && !(*cv_limit > 0.0)) throw ConfigError("CV limit must be positive");
  if (drnn_hidden < 1) throw ConfigError("DRNN hidden size must be positive");
}

double adaptive_rate(const LyapunovCoefficients& c, double de_dw) {
  return c.alpha / (c.phi * (1.0 + (c.beta / c.phi) * de_dw * de_dw));
}

HdlnncController::HdlnncController(const HdlnncConfig& config, Rng& rng) : config_(config) {
  config_.validate();
  som1_ = ann::SomLayer::random(3, config_.som_width, config_.som, rng);
  som2_ = ann::SomLayer::random(config_.som_width, config_.som_width, config_.som, rng);
  hebbian_ = ann::HebbianLayer::random(config_.som_width, config_.feature_width,
                                       config_.hebbian_gamma, config_.hebbian_delta, rng);
  Index width = config_.feature_width;
  for (Index h : config_.mlffnn_hidden) {
    mlffnn_.push_back(ann::DenseLayer::random(width, h, ann::Activation::tanh, rng));
    width = h;
  }
  mlffnn_.push_back(ann::DenseLayer::random(width, 1, ann::Activation::linear, rng));
  hdl_output_ = Vector::Zero(config_.feature_width);
}

Vector HdlnncController::error_features(double e_con) const {
  Vector x(3);
  x << e_con, e_con - e1_, e_con - 2.0 * e1_ + e2_;
  return x;
}

void HdlnncController::hdl_learn(const Vector& x, std::int64_t k) {
  ann::som_update(som1_, x, k);
  const Vector h1 = ann::som_forward(som1_, x);
  ann::som_update(som2_, h1, k);
  const Vector h2 = ann::som_forward(som2_, h1);
  ann::hebbian_update(hebbian_, h2, hdl_output_);
}

Vector HdlnncController::hdl_forward(const Vector& x) const {
  return ann::hebbian_forward(hebbian_, ann::som_forward(som2_, ann::som_forward(som1_, x)));
}

MlffnnPass HdlnncController::mlffnn_forward(const Vector& features) const {
  MlffnnPass pass;
  pass.activations.reserve(mlffnn_.size() + 1);
  pass.activations.push_back(features);
  for (const auto& layer : mlffnn_) pass.activations.push_back(ann::dense_forward(layer, pass.activations.back()));
  pass.cv = pass.activations.back()(0);
  return pass;
}

double HdlnncController::control(double e_con) {
  const Vector x = error_features(e_con);
  hdl_output_ = hdl_forward(x);
  last_pass_ = mlffnn_forward(hdl_output_);
  double cv = last_pass_.cv;
  if (!std::isfinite(cv)) throw NonFiniteOutput("HDLNNC produced a non-finite control variable");
  if (config_.cv_limit) cv = std::clamp(cv, -*config_.cv_limit, *config_.cv_limit);
  e2_ = e1_;
  e1_ = e_con;
  last_cv_ = cv;
  return cv;
}

std::vector<Matrix> HdlnncController::cv_gradients() const {
  std::vector<Matrix> grads(mlffnn_.size());
  if (last_pass_.activations.size() != mlffnn_.size() + 1) {
    for (std::size_t l = 0; l < mlffnn_.size(); ++l)
      grads[l] = Matrix::Zero(mlffnn_[l].inputs(), mlffnn_[l].outputs());
    return grads;
  }
  // delta = dCV / d(pre-activation) of the current layer
  Vector delta = Vector::Ones(1);
  for (std::size_t l = mlffnn_.size(); l-- > 0;) {
    const auto& layer = mlffnn_[l];
    const Vector& out = last_pass_.activations[l + 1];
    for (Index j = 0; j < out.size(); ++j) delta(j) *= ann::activation_slope(layer.activation, out(j));
    grads[l] = last_pass_.activations[l] * delta.transpose();
    delta = layer.weights * delta;
  }
  return grads;
}

UpdateStatus HdlnncController::mlffnn_update(double e_con, double plant_jacobian) {
  const auto grads = cv_gradients();
  std::vector<Matrix> updated(mlffnn_.size());
  for (std::size_t l = 0; l < mlffnn_.size(); ++l) {
    const Matrix& g = grads[l];
    const Matrix de_dw = -plant_jacobian * g;
    Matrix eta = de_dw.unaryExpr([&](double v) { return adaptive_rate(config_.lyapunov, v); });
    updated[l] = mlffnn_[l].weights + (eta.array() * (e_con * plant_jacobian) * g.array()).matrix();
    if (!updated[l].allFinite()) {
      if (skipped_++ % 1000 == 0)
        spdlog::warn("HDLNNC: non-finite MLFFNN gradient, update skipped ({} so far)", skipped_);
      return UpdateStatus::skipped_non_finite;
    }
  }
  for (std::size_t l = 0; l < mlffnn_.size(); ++l) mlffnn_[l].weights = std::move(updated[l]);
  return UpdateStatus::applied;
}

DrnnOnlineModel::DrnnOnlineModel(Index hidden, Rng& rng) : model_(ann::DrnnModel::random(2, hidden, rng)) {}

DrnnOnlineModel::DrnnOnlineModel(ann::DrnnModel model) : model_(std::move(model)) {
  ann::check_width(2, model_.inputs(), "DRNN online model inputs");
}

DrnnOnlineModel::Rates drnn_rates(const ann::DrnnModel& model, const Vector& input) {
  const double nh = static_cast<double>(model.hidden_size());
  double wo = max_abs(model.output_weights);
  double wi = max_abs(input);
  if (wo == 0.0) wo = 1.0;
  if (wi == 0.0) wi = 1.0;
  DrnnOnlineModel::Rates r;
  r.output = 2.0 / nh;
  r.diagonal = 2.0 / (nh * wo * wo);
  r.input = 2.0 / (nh * wo * wo * wi * wi);
  return r;
}

double drnn_train_step(ann::DrnnModel& model, const Vector& hidden_prev, const Vector& u,
                       double target, UpdateStatus* status) {
  const auto eval = ann::drnn_evaluate(model, hidden_prev, u);
  const double e = target - eval.y;
  const auto rates = drnn_rates(model, u);
  const Vector& s = eval.hidden;
  const Vector common =
      (e * model.output_weights.array() * (1.0 - s.array().square())).matrix();
  const Vector g_out = e * s;
  const Vector g_diag = common.cwiseProduct(hidden_prev);
  const Matrix g_in = common * u.transpose();
  const bool finite = std::isfinite(e) && g_out.allFinite() && g_diag.allFinite() && g_in.allFinite();
  if (!finite) {
    if (status) *status = UpdateStatus::skipped_non_finite;
    return e;
  }
  model.output_weights += rates.output * g_out;
  model.diagonal_weights += rates.diagonal * g_diag;
  model.input_weights += rates.input * g_in;
  if (status) *status = UpdateStatus::applied;
  return e;
}

double drnn_input_jacobian(const ann::DrnnModel& model, const Vector& hidden_prev, const Vector& u) {
  const auto eval = ann::drnn_evaluate(model, hidden_prev, u);
  const Vector slope = (1.0 - eval.hidden.array().square()).matrix();
  return model.output_weights.dot(slope.cwiseProduct(model.input_weights.col(0)));
}

DrnnOnlineModel::Update DrnnOnlineModel::update(double cv_prev, double pv) {
  Update out;
  Vector x(2);
  x << cv_prev, pv_prev_;
  const Vector hidden_prev = model_.hidden;
  out.e_mod = drnn_train_step(model_, hidden_prev, x, pv, &out.status);
  if (out.status == UpdateStatus::skipped_non_finite && skipped_++ % 1000 == 0)
    spdlog::warn("DRNN: non-finite gradient, update skipped ({} so far)", skipped_);
  model_.hidden = ann::drnn_evaluate(model_, hidden_prev, x).hidden;
  Vector next(2);
  next << cv_prev, pv;
  jacobian_ = drnn_input_jacobian(model_, model_.hidden, next);
  if (!std::isfinite(jacobian_)) jacobian_ = 0.0;
  pv_prev_ = pv;
  out.jacobian = jacobian_;
  return out;
}

HdlnncLoop::HdlnncLoop(const HdlnncConfig& config, Rng& rng)
    : controller_(config, rng), model_(config.drnn_hidden, rng) {}

double HdlnncLoop::step(double r, double pv) {
  const double e = r - pv;
  const auto upd = model_.update(cv_prev_, pv);
  e_mod_ = upd.e_mod;
  controller_.hdl_learn(controller_.error_features(e), k_);
  const double cv = controller_.control(e);
  controller_.mlffnn_update(e, upd.jacobian);
  cv_prev_ = cv;
  ++k_;
  return cv;
}

}  // namespace nnac::hdlnnc
