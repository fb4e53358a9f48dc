#include <doctest.h>

#include <cmath>
#include <limits>

#include "nnac/ampc/armijo.hpp"
#include "nnac/ampc/controller.hpp"
#include "nnac/ampc/prediction.hpp"
#include "nnac/ampc/pretrain.hpp"
#include "nnac/ampc/qp.hpp"
#include "nnac/ann/finite_diff.hpp"
#include "nnac/errors.hpp"

using namespace nnac;
using namespace nnac::ampc;

namespace {

ann::ElmanModel linear_model(Rng& rng, Index hidden) {
  auto m = ann::ElmanModel::random(1, hidden, 0, rng);
  m.activation = ann::Activation::linear;
  m.input_weights *= 5.0;
  m.context_weights *= 3.0;
  m.output_weights *= 5.0;
  return m;
}

MpcProblem wide_problem(Index N, Index Nu, double lambda) {
  MpcProblem p;
  p.N = N;
  p.Nu = Nu;
  p.lambda = lambda;
  p.u_min = -1e6;
  p.u_max = 1e6;
  p.du_max = 1e6;
  p.y_min = -1e6;
  p.y_max = 1e6;
  return p;
}

}  // namespace

TEST_CASE("clamp_control enforces box and rate exactly") {
  MpcProblem p;
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u_prev = rng.uniform(p.u_min, p.u_max);
    const double u = clamp_control(rng.uniform(-5, 5), u_prev, p);
    CHECK(u >= p.u_min);
    CHECK(u <= p.u_max);
    CHECK(std::abs(u - u_prev) <= p.du_max);
  }
  CHECK(clamp_control(0.1, 0.0, p) == 0.1);
  CHECK(clamp_control(std::nan(""), 0.2, p) == 0.2);
}

TEST_CASE("lower triangular ones") {
  const Matrix J = lower_triangular_ones(3);
  Matrix expected(3, 3);
  expected << 1, 0, 0, 1, 1, 0, 1, 1, 1;
  CHECK(J == expected);
}

TEST_CASE("Hildreth solves a small box QP") {
  // min (x-2)^2 + (y+1)^2  s.t. x <= 1, y >= 0
  Matrix Q = 2 * Matrix::Identity(2, 2);
  Vector f(2);
  f << -4, 2;
  Matrix G(2, 2);
  G << 1, 0, 0, -1;
  Vector b(2);
  b << 1, 0;
  const auto r = hildreth(Q, f, G, b);
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(r.x(1)) < 1e-9);

  // inactive constraints return the unconstrained minimiser
  Vector far(2);
  far << 10, 10;
  Matrix G2(2, 2);
  G2 << 1, 0, 0, 1;
  const auto u = hildreth(Q, f, G2, far);
  CHECK(u.x(0) == doctest::Approx(2.0));
  CHECK(u.x(1) == doctest::Approx(-1.0));
  CHECK(u.sweeps == 0);
}

TEST_CASE("unconstrained QP matches the closed-form least-squares law") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Index N = 10, Nu = 3;
    TrajectoryLinearization lin;
    lin.y_pred = rng.uniform_vector(N, -1, 1);
    lin.sensitivity = rng.uniform_matrix(N, Nu, -1, 1);
    lin.controls = rng.uniform_vector(Nu, -0.5, 0.5);
    const double u_prev = rng.uniform(-0.5, 0.5);
    const double lambda = rng.uniform(0.1, 2.0);
    const Vector ysp = Vector::Constant(N, rng.uniform(-1, 1));
    const auto p = wide_problem(N, Nu, lambda);
    const auto sol = solve_qp(lin, ysp, p, u_prev);

    const Matrix J = lower_triangular_ones(Nu);
    const Matrix A = lin.sensitivity * J;
    const Vector y0 = lin.y_pred + lin.sensitivity * (Vector::Constant(Nu, u_prev) - lin.controls);
    const Vector du = (A.transpose() * A + lambda * Matrix::Identity(Nu, Nu)).ldlt().solve(A.transpose() * (ysp - y0));
    CHECK((sol.du - du).norm() < 1e-9);
    CHECK(!sol.output_softened);
  }
}

TEST_CASE("QP respects the input box and rate limits") {
  Rng rng(3);
  MpcProblem p;
  for (int trial = 0; trial < 50; ++trial) {
    TrajectoryLinearization lin;
    lin.y_pred = rng.uniform_vector(p.N, -1, 1);
    lin.sensitivity = rng.uniform_matrix(p.N, p.Nu, 0, 2);
    lin.controls = Vector::Zero(p.Nu);
    const double u_prev = rng.uniform(-1.4, 1.4);
    const auto sol = solve_qp(lin, Vector::Constant(p.N, rng.uniform(-3, 3)), p, u_prev);
    const Vector U = lower_triangular_ones(p.Nu) * sol.du + Vector::Constant(p.Nu, u_prev);
    CHECK(sol.du.cwiseAbs().maxCoeff() <= p.du_max + 1e-7);
    CHECK(U.maxCoeff() <= p.u_max + 1e-7);
    CHECK(U.minCoeff() >= p.u_min - 1e-7);
  }
}

TEST_CASE("infeasible output bounds are softened instead of failing") {
  MpcProblem p;
  p.N = 5;
  p.Nu = 2;
  TrajectoryLinearization lin;
  lin.y_pred = Vector::Constant(5, 3.0);  // far above y_max, unreachable with du_max
  lin.sensitivity = Matrix::Constant(5, 2, 0.1);
  lin.controls = Vector::Zero(2);
  const auto sol = solve_qp(lin, Vector::Zero(5), p, 0.0);
  CHECK(sol.output_softened);
  CHECK(sol.du.allFinite());
  CHECK(sol.du.cwiseAbs().maxCoeff() <= p.du_max + 1e-7);
}

TEST_CASE("Armijo search") {
  ArmijoParams a;
  // quadratic 1/2 (x - eta g)^2 at x = g = 1: loss(eta) = 1/2 (1 - eta)^2
  auto loss = [](double eta) { return 0.5 * (1 - eta) * (1 - eta); };
  CHECK(armijo_search(loss, 1.0, a) == 1.0);
  auto steep = [](double eta) { return 0.5 * (1 - 10 * eta) * (1 - 10 * eta); };
  const double eta = armijo_search(steep, 10.0, a);
  CHECK(eta == 0.125);  // 1, 0.5 and 0.25 overshoot
  CHECK(steep(eta) <= steep(0) - a.c * eta * 10.0);
  CHECK(armijo_search([](double e) { return e; }, 1.0, a) == 0.0);
  CHECK(armijo_search(loss, 0.0, a) == a.eta0);
}

TEST_CASE("sensitivity matrix agrees with finite differences") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Index inputs = 1 + trial % 2;
    auto m = ann::ElmanModel::random(inputs, 1 + trial % 6, trial % 4, rng);
    m.input_weights *= 8.0;
    m.context_weights *= 4.0;
    m.output_weights *= 8.0;
    for (int k = 0; k < 5; ++k) {
      Vector x(inputs);
      x(0) = rng.uniform(-1, 1);
      if (inputs == 2) x(1) = rng.uniform(-1, 1);
      ann::elman_forward(m, x);
    }
    const Index N = 5 + trial, Nu = 1 + trial % 4;
    const Vector U = rng.uniform_vector(Nu, -1, 1);
    const double y = rng.uniform(-1, 1);
    const Matrix H = sensitivity_matrix(m, U, y, N);
    const Matrix fd = ann::finite_diff_jacobian([&](const Vector& u) { return predict_trajectory(m, u, y, N); }, U, 1e-6);
    CHECK((H - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    CHECK(linearize_trajectory(m, U, y, N).y_pred == predict_trajectory(m, U, y, N));
  }
}

TEST_CASE("output correction makes the zero-input prediction start from the measurement") {
  Rng rng(5);
  auto m = ann::ElmanModel::random(2, 4, 0, rng);
  CHECK(output_correction(m, 0.3) == doctest::Approx(0.3 - m.output()));
}

TEST_CASE("inputs inside the delay window do not influence early predictions") {
  Rng rng(6);
  auto m = ann::ElmanModel::random(2, 4, 3, rng);
  m.input_weights *= 5;
  const Matrix H = sensitivity_matrix(m, Vector::Constant(2, 0.1), 0.0, 8);
  for (Index p = 0; p < 3; ++p) CHECK(H.row(p).isZero());
  CHECK(!H.row(3).isZero());
}

TEST_CASE("linear model: NPLPT settles after one iteration on the closed-form law") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = linear_model(rng, 3);
    const Index N = 12, Nu = 3;
    const double lambda = 0.7;
    const double u_prev = rng.uniform(-0.5, 0.5);
    const double y_meas = rng.uniform(-0.5, 0.5);
    const double y_sp = rng.uniform(-1, 1);
    const auto p = wide_problem(N, Nu, lambda);
    const auto res = nplpt_step(m, y_sp, y_meas, u_prev, p);

    // independent state-space rollout of the same linear model
    const Matrix A = m.context_weights;
    const Vector B = m.input_weights.col(0);
    const Vector C = m.output_weights;
    const double d = y_meas - C.dot(m.context);
    auto simulate = [&](const Vector& U) {
      Vector h = m.context, y(N);
      for (Index k = 0; k < N; ++k) {
        h = A * h + B * U(std::min(k, Nu - 1));
        y(k) = C.dot(h) + d;
      }
      return y;
    };
    const Vector y0 = simulate(Vector::Constant(Nu, u_prev));
    Matrix G(N, Nu);
    for (Index j = 0; j < Nu; ++j) {
      Vector U = Vector::Constant(Nu, u_prev);
      U.tail(Nu - j).array() += 1.0;
      G.col(j) = simulate(U) - y0;
    }
    const Vector du = (G.transpose() * G + lambda * Matrix::Identity(Nu, Nu))
                          .ldlt()
                          .solve(G.transpose() * (Vector::Constant(N, y_sp) - y0));
    CHECK(res.u == doctest::Approx(u_prev + du(0)).epsilon(1e-10));
    CHECK(res.settled_iteration == 1);
    CHECK(res.reason == StopReason::increment_tolerance);
  }
}

TEST_CASE("online adaptation does not increase the sample error") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = ann::ElmanModel::random(2, 5, 0, rng);
    const Vector x = rng.uniform_vector(2, -1, 1);
    const Vector ctx = rng.uniform_vector(5, -0.5, 0.5);
    const double y = rng.uniform(-1, 1);
    const auto r = adapt_sample(m, x, ctx, y, ArmijoParams{});
    CHECK(r.error_after <= r.error_before);
    CHECK(std::abs(y - ann::elman_cell(m, ctx, x).y) == doctest::Approx(r.error_after));
  }
}

TEST_CASE("AMPC controller keeps the applied control feasible") {
  Rng rng(9);
  auto m = ann::ElmanModel::random(2, 5, 2, rng);
  AmpcConfig cfg;
  AmpcController c(m, cfg);
  double u_prev = 0.0, y = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double u = c.step(std::sin(0.05 * k) * 2.0, y);
    CHECK(u >= cfg.mpc.u_min);
    CHECK(u <= cfg.mpc.u_max);
    CHECK(std::abs(u - u_prev) <= cfg.mpc.du_max);
    y = 0.6 * y + 0.5 * u;
    u_prev = u;
  }
}

TEST_CASE("sequence MSE gradient agrees with finite differences") {
  PretrainSpec spec;
  spec.Ts = 0.05;
  spec.segment_duration = 2.0;
  for (std::size_t delay : {0u, 2u}) {
    spec.output_delay = delay;
    const auto data = excitation_data(spec);
    CHECK(data.u.size() == 121);
    Rng rng(10 + delay);
    for (Index inputs : {1, 2}) {
      auto m = ann::ElmanModel::random(inputs, 4, delay, rng);
      m.input_weights *= 10;
      m.output_weights *= 10;
      Vector g;
      const double mse = sequence_mse_gradient(m, data, g);
      CHECK(mse == doctest::Approx(sequence_mse(m, data)).epsilon(1e-12));
      const Vector w = ann::elman_parameters(m);
      auto f = [&](const Vector& p) {
        auto copy = m;
        ann::set_elman_parameters(copy, p);
        Vector out(1);
        out(0) = sequence_mse(copy, data);
        return out;
      };
      const Vector fd = ann::finite_diff_jacobian(f, w, 1e-6).row(0).transpose();
      CHECK((g - fd).norm() <= 1e-5 * std::max(1e-3, fd.norm()));
    }
  }
}

TEST_CASE("pretraining history is monotone and every step is a sufficient decrease") {
  PretrainSpec spec;
  spec.Ts = 0.05;
  spec.segment_duration = 4.0;
  spec.max_passes = 60;
  Rng rng(12);
  const auto res = pretrain_elman(ann::ElmanModel::random(2, 5, 0, rng), spec);
  REQUIRE(res.mse_history.size() == res.passes.size() + 1);
  for (std::size_t i = 0; i < res.passes.size(); ++i) {
    const auto& p = res.passes[i];
    CHECK(res.mse_history[i + 1] <= res.mse_history[i]);
    CHECK(p.mse_after <= p.mse_before - spec.armijo.c * p.step * p.slope);
  }
  CHECK(res.final_mse() < res.mse_history.front());
}

TEST_CASE("pretraining rejects a model whose delay differs from the plant's") {
  PretrainSpec spec;
  spec.output_delay = 3;
  Rng rng(13);
  CHECK_THROWS_AS(pretrain_elman(ann::ElmanModel::random(2, 5, 0, rng), spec), ConfigError);
}

TEST_CASE("active-set QP agrees with Hildreth on well-conditioned problems") {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 3;
    const Matrix R = rng.uniform_matrix(n, n, -1, 1);
    const Matrix Q = R.transpose() * R + Matrix::Identity(n, n);
    const Vector f = rng.uniform_vector(n, -3, 3);
    Matrix G(2 * n, n);
    G << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    const Vector b = Vector::Constant(2 * n, 0.5);
    const Vector x = active_set_qp(Q, f, G, b, Vector::Zero(n));
    const auto h = hildreth(Q, f, G, b);
    REQUIRE(h.converged);
    CHECK((x - h.x).norm() < 1e-7);
    CHECK(((G * x - b).array() <= 1e-12).all());
  }
  Matrix G(1, 1);
  G << 1.0;
  CHECK_THROWS_AS(active_set_qp(Matrix::Identity(1, 1), Vector::Zero(1), G, Vector::Constant(1, -1.0),
                                Vector::Zero(1)),
                  Error);
}
