#include "nnac/ampc/pretrain.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "nnac/errors.hpp"

namespace nnac::ampc {

void PretrainSpec::validate() const {
  if (amplitudes.empty()) throw ConfigError("pretraining needs at least one excitation amplitude");
  if (!(segment_duration > 0.0 && Ts > 0.0)) throw ConfigError("pretraining durations must be positive");
  if (std::llround(segment_duration / Ts) < 2) throw ConfigError("pretraining segment shorter than 2 samples");
  if (!(mse_target > 0.0)) throw ConfigError("pretraining MSE target must be positive");
  if (max_passes < 1) throw ConfigError("pretraining needs at least one pass");
  if (memory < 0) throw ConfigError("pretraining memory must be non-negative");
  armijo.validate();
}

TrainingData excitation_data(const PretrainSpec& spec) {
  spec.validate();
  const auto seg = std::llround(spec.segment_duration / spec.Ts);
  const auto T = seg * static_cast<long long>(spec.amplitudes.size());
  TrainingData data;
  data.u.resize(T + 1);
  data.y.resize(T + 1);
  PlantState state;
  DelayLine delay(spec.output_delay);
  for (long long k = 0; k <= T; ++k) {
    const auto s = std::min<long long>(k / seg, static_cast<long long>(spec.amplitudes.size()) - 1);
    const double local = static_cast<double>(k - s * seg) * spec.Ts;
    data.u(k) = spec.amplitudes[static_cast<std::size_t>(s)] * std::sin(spec.angular_frequency * local);
    data.y(k) = delay.push(state.x1);
    state = plant_step(state, spec.plant, data.u(k)).state;
  }
  return data;
}

namespace {

struct Workspace {
  Matrix hidden;   // H x T, h_k
  Vector control;  // delayed control per step
};

/// Forward pass; fills ws and returns the sum of squared errors.
double forward(const ann::ElmanModel& model, const TrainingData& data, Workspace& ws) {
  const Index T = data.u.size() - 1;
  const Index H = model.hidden_size();
  const bool fb = model.has_output_feedback();
  const auto d = static_cast<Index>(model.input_delay());
  ws.hidden.resize(H, T);
  ws.control.resize(T);
  const Eigen::VectorXd w_u = model.input_weights.col(0);
  const Eigen::VectorXd w_y = fb ? Eigen::VectorXd(model.input_weights.col(1)) : Eigen::VectorXd::Zero(H);
  Vector prev = model.context;
  Vector z(H);
  double sse = 0.0;
  for (Index k = 0; k < T; ++k) {
    const double u = k >= d ? data.u(k - d) : 0.0;
    ws.control(k) = u;
    z.noalias() = model.context_weights * prev;
    z += w_u * u;
    if (fb) z += w_y * data.y(k);
    auto col = ws.hidden.col(k);
    col = ann::activate(model.activation, z);
    const double err = model.output_weights.dot(col) - data.y(k + 1);
    sse += err * err;
    prev = col;
  }
  return sse;
}

}  // namespace

double sequence_mse(const ann::ElmanModel& model, const TrainingData& data) {
  Workspace ws;
  return forward(model, data, ws) / static_cast<double>(data.u.size() - 1);
}

double sequence_mse_gradient(const ann::ElmanModel& model, const TrainingData& data, Vector& grad) {
  Workspace ws;
  const double sse = forward(model, data, ws);
  const Index T = data.u.size() - 1;
  const Index H = model.hidden_size();
  const bool fb = model.has_output_feedback();
  const double scale = 2.0 / static_cast<double>(T);

  Matrix g_in = Matrix::Zero(H, model.inputs());
  Matrix g_ctx = Matrix::Zero(H, H);
  Vector g_out = Vector::Zero(H);
  Vector carry = Vector::Zero(H);
  Vector delta(H);
  const Matrix ctx_t = model.context_weights.transpose();
  for (Index k = T; k-- > 0;) {
    const auto h = ws.hidden.col(k);
    const double r = scale * (model.output_weights.dot(h) - data.y(k + 1));
    g_out += r * h;
    for (Index j = 0; j < H; ++j)
      delta(j) = (r * model.output_weights(j) + carry(j)) * ann::activation_slope(model.activation, h(j));
    g_in.col(0) += delta * ws.control(k);
    if (fb) g_in.col(1) += delta * data.y(k);
    if (k > 0) g_ctx.noalias() += delta * ws.hidden.col(k - 1).transpose();
    else g_ctx.noalias() += delta * model.context.transpose();
    carry.noalias() = ctx_t * delta;
  }
  ann::ElmanModel packed = model;
  packed.input_weights = g_in;
  packed.context_weights = g_ctx;
  packed.output_weights = g_out;
  grad = ann::elman_parameters(packed);
  return sse / static_cast<double>(T);
}

PretrainResult pretrain_elman(ann::ElmanModel model, const PretrainSpec& spec) {
  spec.validate();
  if (model.input_delay() != spec.output_delay)
    throw ConfigError("pretraining: model input delay must equal the plant output delay");
  model.control_delay.reset();
  const TrainingData data = excitation_data(spec);

  PretrainResult res;
  Vector w = ann::elman_parameters(model);
  Vector g;
  double f = sequence_mse_gradient(model, data, g);
  res.mse_history.push_back(f);

  ann::ElmanModel trial = model;
  auto mse_at = [&](const Vector& params) {
    ann::set_elman_parameters(trial, params);
    return sequence_mse(trial, data);
  };

  std::deque<Vector> S, Y;
  std::deque<double> rho;
  auto direction = [&](const Vector& grad) {
    Vector q = -grad;
    std::vector<double> alpha(S.size());
    for (std::size_t i = S.size(); i-- > 0;) {
      alpha[i] = rho[i] * S[i].dot(q);
      q -= alpha[i] * Y[i];
    }
    if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().squaredNorm();
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double beta = rho[i] * Y[i].dot(q);
      q += (alpha[i] - beta) * S[i];
    }
    return q;
  };

  for (int pass = 0; pass < spec.max_passes; ++pass) {
    if (f <= spec.mse_target) break;
    bool steepest = S.empty();
    Vector d = steepest ? Vector(-g) : direction(g);
    double slope = -g.dot(d);
    if (!(slope > 0.0) || !d.allFinite()) {
      S.clear(), Y.clear(), rho.clear();
      steepest = true;
      d = -g;
      slope = g.squaredNorm();
    }
    double eta = armijo_search([&](double e) { return e == 0.0 ? f : mse_at(w + e * d); }, slope, spec.armijo);
    if (eta == 0.0 && !steepest) {
      S.clear(), Y.clear(), rho.clear();
      steepest = true;
      d = -g;
      slope = g.squaredNorm();
      eta = armijo_search([&](double e) { return e == 0.0 ? f : mse_at(w + e * d); }, slope, spec.armijo);
    }
    if (eta == 0.0) break;  // stagnated

    const Vector w_next = w + eta * d;
    ann::set_elman_parameters(model, w_next);
    Vector g_next;
    const double f_next = sequence_mse_gradient(model, data, g_next);
    if (!(f_next <= f - spec.armijo.c * eta * slope))
      throw std::logic_error("pretraining accepted a step without sufficient decrease");

    const Vector s = w_next - w;
    const Vector y = g_next - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * y.squaredNorm() && spec.memory > 0) {
      S.push_back(s);
      Y.push_back(y);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > spec.memory) S.pop_front(), Y.pop_front(), rho.pop_front();
    }
    res.passes.push_back({f, f_next, eta, slope, steepest});
    w = w_next;
    g = std::move(g_next);
    f = f_next;
    res.mse_history.push_back(f);
  }
  ann::set_elman_parameters(model, w);
  res.reached_target = f <= spec.mse_target;
  res.budget_exhausted = !res.reached_target && static_cast<int>(res.passes.size()) >= spec.max_passes;
  res.model = std::move(model);
  return res;
}

}  // namespace nnac::ampc
