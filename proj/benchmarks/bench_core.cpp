#include <benchmark/benchmark.h>

#include <cmath>

#include "nnac/ampc/controller.hpp"
#include "nnac/ampc/prediction.hpp"
#include "nnac/ampc/qp.hpp"
#include "nnac/hdlnnc.hpp"
#include "nnac/plant.hpp"

using namespace nnac;

namespace {

ann::ElmanModel warm_model(Index hidden, std::size_t delay) {
  Rng rng(1, 2);
  auto m = ann::ElmanModel::random(2, hidden, delay, rng);
  m.input_weights *= 5.0;
  m.output_weights *= 5.0;
  Vector x(2);
  for (int k = 0; k < 20; ++k) {
    x << 0.3 * std::sin(0.1 * k), 0.1;
    ann::elman_forward(m, x);
  }
  return m;
}

void BM_PlantStep(benchmark::State& state) {
  PlantState s{0.1, -0.2, 0};
  const PlantParams p;
  double u = 0.0;
  for (auto _ : state) {
    s = plant_step(s, p, u).state;
    u = 0.5 * std::sin(s.x1);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PlantStep);

void BM_Sensitivity(benchmark::State& state) {
  const Index N = state.range(0);
  const auto m = warm_model(5, 10);
  const Vector U = Vector::Constant(5, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(ampc::sensitivity_matrix(m, U, 0.2, N));
}
BENCHMARK(BM_Sensitivity)->Arg(15)->Arg(30);

void BM_SolveQp(benchmark::State& state) {
  ampc::MpcProblem p;
  p.N = 30;
  p.Nu = 5;
  p.du_max = 0.035;
  p.u_min = -1;
  p.u_max = 1;
  const auto m = warm_model(5, 10);
  const auto lin = ampc::linearize_trajectory(m, Vector::Zero(p.Nu), 0.0, p.N);
  const Vector ysp = Vector::Constant(p.N, state.range(0) ? 5.0 : 0.3);  // 5.0 drives the output box active
  for (auto _ : state) benchmark::DoNotOptimize(ampc::solve_qp(lin, ysp, p, 0.0));
}
BENCHMARK(BM_SolveQp)->Arg(0)->Arg(1);

void BM_NplptStep(benchmark::State& state) {
  ampc::MpcProblem p;
  p.N = 30;
  p.Nu = 5;
  p.lambda = 0.8;
  p.max_internal_iters = 20;
  p.du_max = 0.035;
  p.u_min = -1;
  p.u_max = 1;
  const auto m = warm_model(5, 10);
  for (auto _ : state) benchmark::DoNotOptimize(ampc::nplpt_step(m, 0.4, 0.1, 0.0, p));
}
BENCHMARK(BM_NplptStep);

void BM_HdlnncStep(benchmark::State& state) {
  Rng rng(1, 1);
  hdlnnc::HdlnncConfig cfg;
  cfg.som.max_samples = 1e9;
  hdlnnc::HdlnncLoop loop(cfg, rng);
  double pv = 0.0, t = 0.0;
  for (auto _ : state) {
    const double cv = loop.step(std::sin(t), pv);
    pv = 0.9 * pv + 0.1 * cv;
    t += 0.01;
    benchmark::DoNotOptimize(cv);
  }
}
BENCHMARK(BM_HdlnncStep);

}  // namespace

BENCHMARK_MAIN();
