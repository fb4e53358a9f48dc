#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "nnac/ann/dense.hpp"
#include "nnac/ann/drnn.hpp"
#include "nnac/ann/elman.hpp"
#include "nnac/ann/finite_diff.hpp"
#include "nnac/ann/hebbian.hpp"
#include "nnac/ann/snapshot.hpp"
#include "nnac/ann/som.hpp"
#include "nnac/errors.hpp"

using namespace nnac;
using namespace nnac::ann;

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}
}  // namespace

TEST_CASE("dense forward") {
  DenseLayer zero{Matrix::Zero(3, 2), Activation::tanh};
  CHECK(dense_forward(zero, vec({1, 2, 3})).isZero());
  DenseLayer id{Matrix::Identity(3, 3), Activation::linear};
  CHECK(dense_forward(id, vec({1, -2, 3})) == vec({1, -2, 3}));
  DenseLayer one{Matrix::Constant(1, 1, 0.5), Activation::tanh};
  CHECK(dense_forward(one, vec({1}))(0) == doctest::Approx(0.462117157260010));
  CHECK_THROWS_AS(dense_forward(one, vec({1, 2})), DimensionMismatch);
}

TEST_CASE("dense jacobian agrees with central differences") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto layer = DenseLayer::random(4, 3, trial % 2 ? Activation::tanh : Activation::linear, rng);
    const Vector x = rng.uniform_vector(4, -2, 2);
    const Matrix fd = finite_diff_jacobian([&](const Vector& v) { return dense_forward(layer, v); }, x, 1e-6);
    const Matrix an = dense_jacobian(layer, x);
    CHECK((fd - an).norm() <= 1e-6 * std::max(1.0, an.norm()));
  }
}

TEST_CASE("finite differences on simple functions") {
  const Vector x = vec({1, 2, 3});
  CHECK(finite_diff_jacobian([](const Vector& v) { return v; }, x, 1e-5).isApprox(Matrix::Identity(3, 3), 1e-9));
  CHECK(finite_diff_jacobian([](const Vector&) { return vec({4, 5}); }, x, 1e-5).isZero());
  const Matrix sq = finite_diff_jacobian([](const Vector& v) { return Vector(v.array().square()); }, vec({3}), 1e-5);
  CHECK(std::abs(sq(0, 0) - 6.0) < 1e-6);
}

TEST_CASE("SOM schedule") {
  SomSchedule s;
  s.max_samples = 1000;
  CHECK(som_neighborhood(s, 0, 0) == doctest::Approx(5e-5));
  CHECK(som_neighborhood(s, 1000, 0) == doctest::Approx(5e-5 * std::exp(-1.0)));
  CHECK(som_radius(s, 0) == doctest::Approx(7e-5));
  CHECK(som_radius(s, 1000) == doctest::Approx(5e-5));
  double prev = som_radius(s, 0);
  for (int k = 1; k <= 1000; k += 37) {
    const double xi = som_radius(s, k);
    CHECK(xi <= prev);
    prev = xi;
  }
}

TEST_CASE("SOM winner and update") {
  SomSchedule s;
  s.max_samples = 100;
  SomLayer layer{Matrix(2, 2), s};
  layer.weights << 0, 1, 0, 1;  // columns: neuron 0 at (0,0), neuron 1 at (1,1)
  const Vector x = vec({0.9, 0.9});
  CHECK(som_winner(layer, x) == 1);
  CHECK(som_update(layer, x, 0) == 1);
  const double h = 5e-5;
  CHECK(layer.weights(0, 1) == doctest::Approx(1.0 + h * (0.9 - 1.0)));
  CHECK(layer.weights(1, 1) == doctest::Approx(1.0 + h * (0.9 - 1.0)));
  CHECK(layer.weights.col(0).isZero());  // neighbour at distance 1 gets exp(-1/(2 xi^2)) = 0

  SomLayer tie{Matrix::Zero(2, 3), s};
  CHECK(som_winner(tie, x) == 0);
}

TEST_CASE("SOM update never moves the winner away from the input") {
  Rng rng(11);
  SomSchedule s;
  s.l0 = 0.5;
  s.xi0 = 1.0;
  s.xi_f = 0.3;
  s.max_samples = 50;
  for (int trial = 0; trial < 50; ++trial) {
    auto layer = SomLayer::random(3, 6, s, rng);
    const Vector x = rng.uniform_vector(3, -1, 1);
    const Index w = som_winner(layer, x);
    const double before = (x - layer.weights.col(w)).norm();
    som_update(layer, x, trial);
    CHECK((x - layer.weights.col(w)).norm() <= before);
  }
}

TEST_CASE("SOM repeated presentation converges toward the input") {
  SomSchedule s;
  s.l0 = 0.2;
  s.max_samples = 1e9;
  Rng rng(3);
  auto layer = SomLayer::random(2, 4, s, rng);
  const Vector x = vec({0.3, -0.2});
  const Index w = som_winner(layer, x);
  double prev = (x - layer.weights.col(w)).norm();
  for (int k = 0; k < 30; ++k) {
    som_update(layer, x, k);
    const double d = (x - layer.weights.col(w)).norm();
    CHECK(d <= prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("SOM with a fully decayed schedule leaves weights unchanged") {
  SomSchedule s;
  s.max_samples = 1;
  Rng rng(5);
  auto layer = SomLayer::random(2, 3, s, rng);
  const Matrix before = layer.weights;
  som_update(layer, vec({0.5, 0.5}), 100000);
  CHECK(layer.weights == before);
}

TEST_CASE("Hebbian update") {
  HebbianLayer one{Matrix::Constant(1, 1, 0.1), 1e-4, 1e-6};
  hebbian_update(one, vec({1}), vec({1}));
  CHECK(one.weights(0, 0) == doctest::Approx(0.1000999).epsilon(1e-12));

  Rng rng(2);
  auto layer = HebbianLayer::random(3, 2, 1e-4, 1e-6, rng);
  const Matrix before = layer.weights;
  hebbian_update(layer, vec({1, 2, 3}), Vector::Zero(2));
  CHECK(layer.weights == before);

  const Vector y = vec({0.5, -2});
  hebbian_update(layer, Vector::Zero(3), y);
  for (Index j = 0; j < 2; ++j) CHECK(layer.weights.col(j).isApprox(before.col(j) * (1 - 1e-6 * y(j))));
}

TEST_CASE("DRNN forward") {
  DrnnModel zero{Matrix::Zero(4, 2), Vector::Zero(4), Vector::Zero(4), Vector::Zero(4)};
  CHECK(drnn_forward(zero, vec({1, 2})) == 0.0);
  CHECK(zero.hidden.isZero());

  DrnnModel one{Matrix::Ones(1, 1), Vector::Zero(1), Vector::Ones(1), Vector::Zero(1)};
  CHECK(drnn_forward(one, vec({0.5})) == doctest::Approx(0.462117157260010));

  // without self-loops the DRNN is a tanh layer followed by a linear layer
  Rng rng(4);
  auto m = DrnnModel::random(2, 5, rng);
  m.diagonal_weights.setZero();
  const Vector u = vec({0.3, -0.7});
  const DenseLayer l1{m.input_weights.transpose(), Activation::tanh};
  const DenseLayer l2{m.output_weights, Activation::linear};
  CHECK(drnn_forward(m, u) == doctest::Approx(dense_forward(l2, dense_forward(l1, u))(0)));
}

TEST_CASE("Elman forward") {
  ElmanModel zero(1, 3);
  CHECK(elman_forward(zero, vec({1})) == 0.0);

  ElmanModel m(1, 1);
  m.input_weights(0, 0) = 1;
  m.context_weights(0, 0) = 0.5;
  m.output_weights(0) = 1;
  m.context.setZero();
  CHECK(elman_forward(m, vec({1})) == doctest::Approx(0.761594155955765));
  CHECK(elman_forward(m, vec({0})) == doctest::Approx(0.363399484389053));
}

TEST_CASE("Elman input delay shifts only the control channel") {
  Rng rng(9);
  auto a = ElmanModel::random(2, 4, 0, rng);
  auto b = a;
  b.control_delay = DelayLine(3);
  std::vector<double> ya, yb;
  for (int k = 0; k < 10; ++k) {
    const double u = std::sin(0.3 * k);
    const double y = 0.1 * k;
    Vector xa(2), xb(2);
    xa << (k >= 3 ? std::sin(0.3 * (k - 3)) : 0.0), y;
    xb << u, y;
    ya.push_back(elman_forward(a, xa));
    yb.push_back(elman_forward(b, xb));
  }
  for (int k = 0; k < 10; ++k) CHECK(ya[k] == yb[k]);
}

TEST_CASE("recurrent outputs are bounded by the absolute output weights") {
  Rng rng(21);
  auto e = ElmanModel::random(2, 6, 0, rng);
  e.input_weights *= 30.0;
  auto d = DrnnModel::random(2, 6, rng);
  d.input_weights *= 30.0;
  for (int k = 0; k < 50; ++k) {
    const Vector u = rng.uniform_vector(2, -5, 5);
    CHECK(std::abs(elman_forward(e, u)) <= e.output_weights.cwiseAbs().sum() + 1e-12);
    CHECK(std::abs(drnn_forward(d, u)) <= d.output_weights.cwiseAbs().sum() + 1e-12);
  }
}

TEST_CASE("replaying from a reset state is bit-identical") {
  Rng rng(13);
  const auto e0 = ElmanModel::random(2, 5, 2, rng);
  const auto d0 = DrnnModel::random(2, 5, rng);
  auto run = [&](ElmanModel e, DrnnModel d) {
    std::vector<double> out;
    for (int k = 0; k < 25; ++k) {
      Vector u(2);
      u << std::cos(0.2 * k), 0.1 * k;
      out.push_back(elman_forward(e, u));
      out.push_back(drnn_forward(d, u));
    }
    return out;
  };
  CHECK(run(e0, d0) == run(e0, d0));
}

TEST_CASE("Elman parameter flattening round-trips") {
  Rng rng(1);
  auto m = ElmanModel::random(2, 3, 1, rng);
  const Vector p = elman_parameters(m);
  CHECK(p.size() == elman_parameter_count(m));
  CHECK(p.size() == 2 * 3 + 3 * 3 + 3);
  CHECK(p(1) == m.input_weights(1, 0));  // column-major
  ElmanModel z(2, 3, 1);
  set_elman_parameters(z, p);
  CHECK(z.input_weights == m.input_weights);
  CHECK(z.context_weights == m.context_weights);
  CHECK(z.output_weights == m.output_weights);
}

TEST_CASE("JSON snapshots round-trip exactly") {
  Rng rng(17);
  auto e = ElmanModel::random(2, 4, 3, rng);
  e.control_delay.assign({0.1, 0.2, 0.3});
  const auto path = std::filesystem::temp_directory_path() / "nnac_elman_snapshot.json";
  save_elman(e, path);
  const auto back = load_elman(path);
  std::filesystem::remove(path);
  CHECK(back.input_weights == e.input_weights);
  CHECK(back.context_weights == e.context_weights);
  CHECK(back.output_weights == e.output_weights);
  CHECK(back.context == e.context);
  CHECK(back.control_delay.contents() == e.control_delay.contents());

  const auto d = DrnnModel::random(2, 3, rng);
  nlohmann::json j = d;
  const auto d2 = j.get<DrnnModel>();
  CHECK(d2.input_weights == d.input_weights);
  CHECK(d2.diagonal_weights == d.diagonal_weights);
  CHECK(d2.hidden == d.hidden);

  const Matrix m = rng.uniform_matrix(2, 3, -1, 1);
  const auto mj = matrix_to_json(m);
  CHECK(mj["data"][1].get<double>() == m(0, 1));  // row-major
  CHECK(matrix_from_json(mj) == m);
}
