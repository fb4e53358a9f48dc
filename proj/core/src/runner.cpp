#include "nnac/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include <spdlog/spdlog.h>

#include "nnac/ann/snapshot.hpp"
#include "nnac/config_io.hpp"
#include "nnac/errors.hpp"
#include "nnac/hdlnnc.hpp"
#include "nnac/plots.hpp"
#include "nnac/report.hpp"
#include "nnac/trace_io.hpp"

namespace nnac {

namespace {

// RNG streams per consumer, so each controller's weights depend only on the seed.
constexpr std::uint64_t kHdlnncStream = 1;
constexpr std::uint64_t kAmpcStream = 2;

/// Shared closed loop: measure, control, actuate, record.
template <typename Control>
ControllerRun closed_loop(const ScenarioConfig& config, const std::string& id, Control&& control) {
  ControllerRun run;
  run.controller = id;
  const auto steps = config.steps();
  run.trace.rows.reserve(static_cast<std::size_t>(steps + 1));
  ReferenceSignal reference(config.reference, config.Ts);
  const ParamSchedule schedule(config.params);
  DelayLine output_delay(config.delay_steps);
  PlantState state;
  try {
    for (std::int64_t k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) * config.Ts;
      const double y = output_delay.push(state.x1);
      const double r = reference.sample(t);
      const double u = control(r, y);
      run.trace.append(k, t, r, y, u);
      state = plant_step(state, schedule.params_at(t), u).state;
    }
  } catch (const Error& e) {
    run.aborted = true;
    run.abort_message = e.what();
    spdlog::error("{} run aborted at row {}: {}", id, run.trace.size(), e.what());
  }
  return run;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool RunArtifacts::aborted() const {
  for (const auto& r : runs)
    if (r.aborted) return true;
  return false;
}

const ControllerRun& RunArtifacts::run(const std::string& controller) const {
  for (const auto& r : runs)
    if (r.controller == controller) return r;
  throw Error("no run for controller " + controller);
}

std::vector<ConstraintViolation> check_constraints(const ControlTrace& trace, const ampc::MpcProblem& problem) {
  std::vector<ConstraintViolation> out;
  double u_prev = 0.0;
  for (const auto& row : trace.rows) {
    if (!(row.u >= problem.u_min && row.u <= problem.u_max))
      out.push_back({row.k, "u = " + format_double(row.u) + " outside the input box"});
    if (!(std::abs(row.u - u_prev) <= problem.du_max))
      out.push_back({row.k, "|du| = " + format_double(std::abs(row.u - u_prev)) + " exceeds du_max"});
    u_prev = row.u;
  }
  return out;
}

ControllerRun run_hdlnnc(const ScenarioConfig& config) {
  Rng rng(config.seed, kHdlnncStream);
  hdlnnc::HdlnncLoop loop(config.hdlnnc, rng);
  std::vector<double> model_error;
  model_error.reserve(static_cast<std::size_t>(config.steps() + 1));
  auto run = closed_loop(config, kHdlnncId, [&](double r, double y) {
    const double cv = loop.step(r, y);
    model_error.push_back(loop.last_model_error());
    return cv;
  });
  run.skipped_updates = loop.controller().skipped_updates() + loop.model().skipped_updates();
  run.model_error = std::move(model_error);
  return run;
}

std::vector<ModelErrorSummary> model_error_by_window(const ControllerRun& run, const std::vector<Window>& windows) {
  std::vector<ModelErrorSummary> out;
  const std::size_t n = std::min(run.model_error.size(), run.trace.size());
  for (const auto& w : windows) {
    ModelErrorSummary s{w};
    for (std::size_t i = 0; i < n; ++i) {
      const double t = run.trace.rows[i].t;
      if (t >= w.t0 - 1e-9 && t < w.t1 - 1e-9) {
        s.abs_sum += std::abs(run.model_error[i]);
        ++s.samples;
      }
    }
    out.push_back(s);
  }
  return out;
}

ControllerRun run_ampc(const ScenarioConfig& config, const ann::ElmanModel& model) {
  ampc::AmpcController controller(model, config.ampc.controller);
  auto run = closed_loop(config, kAmpcId, [&](double r, double y) { return controller.step(r, y); });
  run.skipped_updates = controller.skipped_adaptations();
  run.controller_failures = controller.failures();
  return run;
}

ann::ElmanModel initial_elman(const ScenarioConfig& config) {
  Rng rng(config.seed, kAmpcStream);
  return ann::ElmanModel::random(config.ampc.output_feedback ? 2 : 1, config.ampc.hidden, config.delay_steps, rng);
}

ampc::PretrainResult prepare_ampc_model(const ScenarioConfig& config) {
  if (config.ampc.pretrained_model.empty()) {
    auto res = ampc::pretrain_elman(initial_elman(config), config.ampc.pretrain);
    spdlog::info("pretraining: {} passes, MSE {:.3e}{}", res.passes.size(), res.final_mse(),
                 res.budget_exhausted ? " (budget exhausted)" : "");
    return res;
  }
  ampc::PretrainResult res;
  res.model = ann::load_elman(config.ampc.pretrained_model);
  if (res.model.input_delay() != config.delay_steps)
    throw ConfigError("pretrained model delay does not match the scenario");
  if (res.model.has_output_feedback() != config.ampc.output_feedback)
    throw ConfigError("pretrained model inputs do not match ampc.output_feedback");
  res.mse_history.push_back(ampc::sequence_mse(res.model, ampc::excitation_data(config.ampc.pretrain)));
  res.reached_target = res.final_mse() <= config.ampc.pretrain.mse_target;
  return res;
}

IcqiReport compute_report(const std::vector<ControllerRun>& runs, const std::vector<Window>& windows) {
  IcqiReport report;
  for (const auto& w : windows) {
    for (const auto& run : runs) {
      try {
        report.entries.push_back({w, run.controller, icqi(run.trace, w)});
      } catch (const EmptyWindow&) {
        if (!run.aborted) throw;  // an aborted trace may stop short of the window
      }
    }
  }
  return report;
}

RunArtifacts run_scenario(const ScenarioConfig& config, bool write) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunArtifacts art;
  art.config = config;
  art.pretraining = prepare_ampc_model(config);

  spdlog::info("{}: running HDLNNC ({} steps)", config.name, config.steps());
  art.runs.push_back(run_hdlnnc(config));
  spdlog::info("{}: running AMPC", config.name);
  art.runs.push_back(run_ampc(config, art.pretraining->model));

  art.violations = check_constraints(art.run(kAmpcId).trace, config.ampc.controller.mpc);
  for (const auto& v : art.violations) spdlog::error("AMPC constraint violation at k={}: {}", v.k, v.what);
  art.report = compute_report(art.runs, config.icqi_windows);
  art.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!write) return art;

  art.directory = config.output_directory;
  std::filesystem::create_directories(art.directory);
  const auto put = [&](const std::filesystem::path& p) { art.files.push_back(p); };

  std::vector<NamedTrace> named;
  for (const auto& run : art.runs) {
    const auto path = art.directory / ("trace_" + run.controller + ".csv");
    write_trace_csv(path, run.trace);
    if (run.aborted) write_error_marker(path, run.abort_message);
    put(path);
    named.push_back({run.controller, &run.trace});
  }
  const std::vector<std::string> ids{kHdlnncId, kAmpcId};
  for (auto& p : emit_report(art.report, ids, art.directory)) put(p);
  if (!art.aborted())
    for (auto& p : emit_plots(named, config.plot_ranges, art.directory)) put(p);

  save_config(config, art.directory / "config.json");
  put(art.directory / "config.json");
  ann::save_elman(art.pretraining->model, art.directory / "model_pretrained.json");
  put(art.directory / "model_pretrained.json");

  nlohmann::json meta = {{"scenario", config.name},
                         {"seed", config.seed},
                         {"config_hash", config_hash(config)},
                         {"rng", "mt19937_64"},
                         {"pretrain_mse", art.pretraining->final_mse()},
                         {"pretrain_passes", art.pretraining->passes.size()},
                         {"constraint_violations", art.violations.size()},
                         {"wall_seconds", art.wall_seconds},
                         {"timestamp", timestamp()}};
  for (const auto& run : art.runs)
    meta["runs"][run.controller] = {{"rows", run.trace.size()},
                                    {"aborted", run.aborted},
                                    {"abort_message", run.abort_message},
                                    {"skipped_updates", run.skipped_updates},
                                    {"controller_failures", run.controller_failures}};
  const auto& h = art.run(kHdlnncId);
  std::vector<Window> model_windows{{0.0, config.duration + config.Ts}};
  model_windows.insert(model_windows.end(), config.icqi_windows.begin(), config.icqi_windows.end());
  auto& me = meta["hdlnnc_model_error"];
  me = nlohmann::json::array();
  for (const auto& s : model_error_by_window(h, model_windows))
    me.push_back({{"window", {s.window.t0, std::min(s.window.t1, config.duration)}},
                  {"abs_sum", s.abs_sum},
                  {"mean_abs", s.samples ? s.abs_sum / static_cast<double>(s.samples) : 0.0},
                  {"samples", s.samples}});
  std::ofstream(art.directory / "metadata.json") << meta.dump(2) << '\n';
  put(art.directory / "metadata.json");
  return art;
}

}  // namespace nnac
