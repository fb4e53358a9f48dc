// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 once every criterion has been evaluated, so the suite can
// run under ctest while still reporting unattained targets. Pass --strict to
// exit 1 when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "nnac/ampc/controller.hpp"
#include "nnac/ampc/prediction.hpp"
#include "nnac/ampc/qp.hpp"
#include "nnac/ann/finite_diff.hpp"
#include "nnac/hdlnnc.hpp"
#include "nnac/metrics.hpp"
#include "nnac/plant.hpp"
#include "nnac/runner.hpp"
#include "nnac/scenario.hpp"

using namespace nnac;
namespace fs = std::filesystem;

namespace {

constexpr int kSeeds = 10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const Icqi& entry(const IcqiReport& r, const Window& w, const std::string& controller) {
  for (const auto& e : r.entries)
    if (e.window == w && e.controller == controller) return e.values;
  throw std::runtime_error("missing report entry");
}

struct SeedRuns {
  std::vector<RunArtifacts> desk;
  std::vector<RunArtifacts> delay;
};

RunArtifacts run_seed(const std::string& scenario, std::uint64_t seed, const fs::path& dir = {}) {
  auto c = builtin_scenario(scenario);
  c.seed = seed;
  if (!dir.empty()) c.output_directory = dir.string();
  return run_scenario(c, !dir.empty());
}

Outcome criterion1(const SeedRuns& runs) {
  const std::vector<Window> windows{{8, 16}, {32, 40}, {88, 96}, {100, 104}, {104, 108}, {116, 120}, {144, 148}};
  int ok = 0;
  double slowest = 0.0;
  for (const auto& r : runs.desk) {
    slowest = std::max(slowest, r.wall_seconds);
    if (r.aborted()) continue;
    bool all = true;
    for (const auto& w : windows) {
      const auto& h = entry(r.report, w, kHdlnncId);
      const auto& a = entry(r.report, w, kAmpcId);
      all = all && a.iae < h.iae && a.ise < h.ise;
    }
    ok += all;
  }
  return {ok >= 8 && slowest < 300.0,
          fmt("%.0f/10 seeds with AMPC IAE and ISE lower in all 7 windows; slowest run %.1f s", ok, slowest)};
}

Outcome criterion2(const SeedRuns& runs) {
  int ok = 0;
  double slowest = 0.0, worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& r : runs.delay) {
    slowest = std::max(slowest, r.wall_seconds);
    if (r.aborted()) continue;
    bool all = true;
    for (const auto& w : r.config.icqi_windows) {
      const double ratio = entry(r.report, w, kHdlnncId).iae / entry(r.report, w, kAmpcId).iae;
      worst_ratio = std::min(worst_ratio, ratio);
      all = all && ratio >= 10.0;
    }
    ok += all;
  }
  return {ok >= 8 && slowest < 300.0,
          fmt("%.0f/10 seeds with HDLNNC/AMPC IAE >= 10 in every window; smallest ratio %.3g; slowest run %.1f s",
              ok, worst_ratio, slowest)};
}

Outcome criterion3(const SeedRuns& runs) {
  std::size_t violations = 0, checked = 0;
  for (const auto* set : {&runs.desk, &runs.delay})
    for (const auto& r : *set) {
      const auto& p = r.config.ampc.controller.mpc;
      violations += check_constraints(r.run(kAmpcId).trace, p).size();
      checked += r.run(kAmpcId).trace.size();
    }
  return {violations == 0, fmt("%.0f violations in %.0f AMPC samples", static_cast<double>(violations),
                               static_cast<double>(checked))};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  Rng rng(404);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index hidden = 1 + static_cast<Index>(rng.uniform(0, 8 - 1e-9));
    const Index N = 1 + static_cast<Index>(rng.uniform(0, 30 - 1e-9));
    const Index Nu = std::min<Index>(N, 1 + static_cast<Index>(rng.uniform(0, 5 - 1e-9)));
    const Index inputs = trial % 2 ? 2 : 1;
    const auto delay = static_cast<std::size_t>(rng.uniform(0, 4 - 1e-9));
    auto m = ann::ElmanModel::random(inputs, hidden, delay, rng);
    m.input_weights *= rng.uniform(1, 10);
    m.context_weights *= rng.uniform(1, 8);
    m.output_weights *= rng.uniform(1, 10);
    for (int k = 0; k < 10; ++k) {
      Vector x(inputs);
      x(0) = rng.uniform(-1, 1);
      if (inputs == 2) x(1) = rng.uniform(-1, 1);
      ann::elman_forward(m, x);
    }
    const Vector U = rng.uniform_vector(Nu, -1, 1);
    const double y = rng.uniform(-1, 1);
    const Matrix H = ampc::sensitivity_matrix(m, U, y, N);
    const Matrix fd =
        ann::finite_diff_jacobian([&](const Vector& u) { return ampc::predict_trajectory(m, u, y, N); }, U, 1e-6);
    const double denom = std::max(fd.norm(), 1e-12);
    worst = std::max(worst, (H - fd).norm() / denom);
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-4 && elapsed < 10.0,
          fmt("worst relative Frobenius error %.3g over 100 models in %.2f s", worst, elapsed)};
}

Outcome criterion5() {
  Rng rng(505);
  constexpr double kStep = 1e-3;
  double worst = 0.0;
  int instances = 0, softened = 0;
  for (int trial = 0; trial < 50; ++trial) {
    ampc::MpcProblem p;
    p.Nu = trial < 25 ? 1 : 2;
    p.N = p.Nu + static_cast<Index>(rng.uniform(0, 5 - 1e-9));
    p.lambda = rng.uniform(0.1, 1.0);
    p.du_max = 0.3;
    p.u_min = -1.5;
    p.u_max = 1.5;
    p.y_min = -rng.uniform(0.8, 1.5);
    p.y_max = rng.uniform(0.8, 1.5);
    ampc::TrajectoryLinearization lin;
    lin.y_pred = rng.uniform_vector(p.N, -0.7, 0.7);
    lin.sensitivity = rng.uniform_matrix(p.N, p.Nu, -0.6, 0.6);
    lin.controls = Vector::Zero(p.Nu);
    // u_prev on the grid so the box edges are grid points
    const double u_prev = std::round(rng.uniform(-1.45, 1.45) / kStep) * kStep;
    const Vector ysp = Vector::Constant(p.N, rng.uniform(-1.5, 1.5));

    const Matrix J = ampc::lower_triangular_ones(p.Nu);
    auto feasible = [&](const Vector& du) {
      const Vector U = J * du + Vector::Constant(p.Nu, u_prev);
      if (U.maxCoeff() > p.u_max || U.minCoeff() < p.u_min) return false;
      const Vector y = lin.y_pred + lin.sensitivity * (U - lin.controls);
      return y.maxCoeff() <= p.y_max && y.minCoeff() >= p.y_min;
    };
    const int n = static_cast<int>(std::lround(p.du_max / kStep));
    double grid_best = std::numeric_limits<double>::infinity();
    Vector du(p.Nu);
    for (int i = -n; i <= n; ++i) {
      du(0) = i * kStep;
      for (int j = (p.Nu == 2 ? -n : 0); j <= (p.Nu == 2 ? n : 0); ++j) {
        if (p.Nu == 2) du(1) = j * kStep;
        if (!feasible(du)) continue;
        grid_best = std::min(grid_best, ampc::qp_objective(lin, ysp, p, u_prev, du));
      }
    }
    const auto sol = ampc::solve_qp(lin, ysp, p, u_prev);
    if (!std::isfinite(grid_best)) {
      // no feasible grid point: the solver must report softening
      softened += sol.output_softened;
      worst = std::max(worst, sol.output_softened ? 0.0 : 1.0);
      continue;
    }
    ++instances;
    const double obj = ampc::qp_objective(lin, ysp, p, u_prev, sol.du);
    worst = std::max(worst, std::abs(obj - grid_best));
  }
  return {worst <= 2e-3, fmt("worst |objective - grid optimum| %.3g over %.0f feasible instances (%.0f softened)",
                             worst, instances, softened)};
}

Outcome criterion6() {
  Rng rng(606);
  double worst = 0.0;
  bool one_iteration = true;
  for (int trial = 0; trial < 20; ++trial) {
    auto m = ann::ElmanModel::random(1, 3, 0, rng);
    m.activation = ann::Activation::linear;
    m.input_weights *= 5.0;
    m.context_weights *= 3.0;
    m.output_weights *= 5.0;
    ampc::MpcProblem p;
    p.N = 12;
    p.Nu = 3;
    p.lambda = 0.7;
    p.u_min = p.y_min = -1e6;
    p.u_max = p.y_max = p.du_max = 1e6;
    const double u_prev = rng.uniform(-0.5, 0.5);
    const double y_meas = rng.uniform(-0.5, 0.5);
    const double y_sp = rng.uniform(-1, 1);
    const auto res = ampc::nplpt_step(m, y_sp, y_meas, u_prev, p);

    // closed-form law on the state-space form of the same model
    const double d = y_meas - m.output_weights.dot(m.context);
    auto simulate = [&](const Vector& U) {
      Vector h = m.context, y(p.N);
      for (Index k = 0; k < p.N; ++k) {
        h = m.context_weights * h + m.input_weights.col(0) * U(std::min(k, p.Nu - 1));
        y(k) = m.output_weights.dot(h) + d;
      }
      return y;
    };
    const Vector y0 = simulate(Vector::Constant(p.Nu, u_prev));
    Matrix G(p.N, p.Nu);
    for (Index j = 0; j < p.Nu; ++j) {
      Vector U = Vector::Constant(p.Nu, u_prev);
      U.tail(p.Nu - j).array() += 1.0;
      G.col(j) = simulate(U) - y0;
    }
    const Vector du = (G.transpose() * G + p.lambda * Matrix::Identity(p.Nu, p.Nu))
                          .ldlt()
                          .solve(G.transpose() * (Vector::Constant(p.N, y_sp) - y0));
    worst = std::max(worst, std::abs(res.u - (u_prev + du(0))));
    one_iteration = one_iteration && res.settled_iteration == 1;
  }
  return {worst <= 1e-8 && one_iteration,
          fmt("worst |u - closed form| %.3g; settled after one iteration: ", worst) +
              (one_iteration ? "yes" : "no")};
}

Outcome criterion7(const SeedRuns& runs) {
  int reached = 0;
  bool armijo = true, monotone = true;
  double worst_mse = 0.0;
  std::size_t passes = 0;
  for (const auto* set : {&runs.desk, &runs.delay})
    for (const auto& r : *set) {
      if (!r.pretraining) continue;
      const auto& pt = *r.pretraining;
      const auto& a = r.config.ampc.pretrain.armijo;
      for (std::size_t i = 0; i < pt.passes.size(); ++i) {
        const auto& p = pt.passes[i];
        armijo = armijo && p.mse_after <= p.mse_before - a.c * p.step * p.slope;
        monotone = monotone && pt.mse_history[i + 1] <= pt.mse_history[i];
      }
      passes += pt.passes.size();
    }
  for (const auto& r : runs.desk) {
    if (!r.pretraining) continue;
    const double mse = r.pretraining->final_mse();
    worst_mse = std::max(worst_mse, mse);
    reached += r.pretraining->passes.size() <= 5000 && mse <= 1e-8;
  }
  return {armijo && monotone && reached >= 8,
          fmt("%.0f/10 desk seeds reach MSE <= 1e-8 (worst %.3g); %.0f passes checked", reached, worst_mse,
              static_cast<double>(passes)) +
              "; Armijo " + (armijo ? "ok" : "violated") + ", history " + (monotone ? "monotone" : "not monotone")};
}

Outcome criterion8() {
  Rng rng(808);
  std::size_t bad = 0;
  for (int i = 0; i < 1000000; ++i) {
    hdlnnc::LyapunovCoefficients c;
    c.alpha = rng.uniform(1e-3, 1.0);
    c.beta = rng.uniform(1e-3, 1.0);
    c.phi = rng.uniform(1e-3, 1.0);
    const double g = i % 10 == 0 ? 0.0 : rng.uniform(-10, 10);
    const double eta = hdlnnc::adaptive_rate(c, g);
    const double cap = c.alpha / c.phi;
    const bool ok = eta > 0.0 && eta <= cap && ((eta == cap) == (g == 0.0));
    bad += !ok;
  }
  Rng drng(809);
  int monotone = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto m = ann::DrnnModel::random(2, 10, drng);
    const Vector h = m.hidden;
    const Vector u = drng.uniform_vector(2, -1, 1);
    const double target = drng.uniform(-0.5, 0.5);
    double prev = std::abs(hdlnnc::drnn_train_step(m, h, u, target));
    bool ok = true;
    for (int step = 0; step < 100; ++step) {
      const double e = std::abs(hdlnnc::drnn_train_step(m, h, u, target));
      ok = ok && e <= prev;
      prev = e;
    }
    monotone += ok;
  }
  return {bad == 0 && monotone >= 99,
          fmt("%.0f of 1e6 adaptive-rate samples out of contract; %.0f/100 DRNN trials non-increasing",
              static_cast<double>(bad), monotone)};
}

Outcome criterion9() {
  std::ifstream in(NNAC_TEST_DATA_DIR "/plant_oracle.txt");
  if (!in) return {false, "plant oracle file missing"};
  int rows = 0, mismatches = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> v;
    std::string tok;
    while (ls >> tok) v.push_back(std::strtod(tok.c_str(), nullptr));
    if (v.size() != 21) return {false, "malformed oracle row"};
    const PlantParams p{v[0], v[1], v[2]};
    PlantState s{v[3], v[4], 0};
    for (int step = 0; step < 5; ++step) {
      const auto out = plant_step(s, p, v[5]);
      mismatches += out.state.x1 != v[6 + 3 * step] || out.state.x2 != v[7 + 3 * step] || out.y != v[8 + 3 * step];
      s = out.state;
    }
    ++rows;
  }
  ControlTrace tr;
  for (std::int64_t k = 0; k <= 1000; ++k) {
    const double t = static_cast<double>(k) * 1e-3;
    tr.append(k, t, t, 0.0, 0.0);
  }
  const auto v = icqi(tr, {0.0, 1.0});
  const double err = std::max({std::abs(v.iae - 0.5), std::abs(v.ise - 1.0 / 3.0), std::abs(v.itae - 1.0 / 3.0)});
  return {rows == 20 && mismatches == 0 && err <= 1e-5,
          fmt("%.0f oracle tuples, %.0f mismatching steps; ICQI of e = t off by %.3g", rows, mismatches, err)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10(const fs::path& first) {
  const auto second = fs::temp_directory_path() / "nnac_acceptance_repeat";
  fs::remove_all(second);
  run_seed("desk", 1, second);
  std::vector<std::string> differing;
  for (const char* f : {"trace_HDLNNC.csv", "trace_AMPC.csv", "report.json", "report.txt"}) {
    if (!fs::exists(first / f) || slurp(first / f) != slurp(second / f)) differing.emplace_back(f);
  }
  fs::remove_all(second);
  std::string detail = differing.empty() ? "traces and reports byte-identical" : "differing:";
  for (const auto& f : differing) detail += " " + f;
  return {differing.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::string(argv[1]) == "--strict";
  spdlog::set_level(spdlog::level::warn);
  std::map<int, Outcome> results;
  auto guarded = [&](int id, const std::function<Outcome()>& f) {
    try {
      results[id] = f();
    } catch (const std::exception& e) {
      results[id] = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s\n", results[id].pass ? "PASS" : "FAIL", id, results[id].detail.c_str());
    std::fflush(stdout);
  };

  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(8, criterion8);
  guarded(9, criterion9);

  SeedRuns runs;
  const auto first_dir = fs::temp_directory_path() / "nnac_acceptance_first";
  fs::remove_all(first_dir);
  try {
    for (int s = 1; s <= kSeeds; ++s) {
      runs.desk.push_back(run_seed("desk", s, s == 1 ? first_dir : fs::path{}));
      std::printf("  desk seed %d done (%.1f s)\n", s, runs.desk.back().wall_seconds);
      std::fflush(stdout);
    }
    for (int s = 1; s <= kSeeds; ++s) {
      runs.delay.push_back(run_seed("b_delay", s));
      std::printf("  b_delay seed %d done (%.1f s)\n", s, runs.delay.back().wall_seconds);
      std::fflush(stdout);
    }
  } catch (const std::exception& e) {
    std::printf("scenario runs failed: %s\n", e.what());
  }

  guarded(1, [&] { return criterion1(runs); });
  guarded(2, [&] { return criterion2(runs); });
  guarded(3, [&] { return criterion3(runs); });
  guarded(7, [&] { return criterion7(runs); });
  guarded(10, [&] { return criterion10(first_dir); });
  fs::remove_all(first_dir);

  int passed = 0;
  std::printf("\nsummary:\n");
  for (const auto& [id, r] : results) {
    std::printf("  criterion %2d %s\n", id, r.pass ? "PASS" : "FAIL");
    passed += r.pass;
  }
  std::printf("%d/%zu criteria passed\n", passed, results.size());
  return strict && passed != static_cast<int>(results.size()) ? 1 : 0;
}
