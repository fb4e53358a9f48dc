// nnac: pretrain the AMPC model, run scenarios, rebuild reports.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "nnac/ann/snapshot.hpp"
#include "nnac/config_io.hpp"
#include "nnac/errors.hpp"
#include "nnac/plots.hpp"
#include "nnac/report.hpp"
#include "nnac/runner.hpp"
#include "nnac/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kAbort = 1, kConfig = 2 };

struct Options {
  std::string config_path;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> mse_target;
  std::string out;
  std::string in;
  bool verbose = false;
};

nnac::ScenarioConfig resolve_config(const Options& o) {
  nnac::ScenarioConfig c;
  if (!o.config_path.empty()) {
    c = nnac::load_config(o.config_path);
    if (!o.scenario.empty() && o.scenario != c.name)
      throw nnac::ConfigError("--scenario " + o.scenario + " conflicts with config scenario " + c.name);
  } else {
    c = nnac::builtin_scenario(o.scenario.empty() ? "desk" : o.scenario);
  }
  if (o.seed) c.seed = *o.seed;
  if (o.mse_target) c.ampc.pretrain.mse_target = *o.mse_target;
  c.validate();
  return c;
}

int cmd_pretrain(const Options& o) {
  auto c = resolve_config(o);
  auto res = nnac::prepare_ampc_model(c);
  nnac::ann::save_elman(res.model, o.out);
  std::printf("passes %zu  final MSE %.6e  target %s\n", res.passes.size(), res.final_mse(),
              res.reached_target ? "reached" : "not reached");
  return kOk;
}

int cmd_run(const Options& o) {
  auto c = resolve_config(o);
  c.output_directory = o.out;
  const auto art = nnac::run_scenario(c, true);
  std::cout << nnac::format_report_table(art.report, {nnac::kHdlnncId, nnac::kAmpcId});
  std::printf("wrote %zu files to %s (%.1f s)\n", art.files.size(), o.out.c_str(), art.wall_seconds);
  if (!art.violations.empty()) {
    std::fprintf(stderr, "%zu AMPC constraint violations\n", art.violations.size());
    return kAbort;
  }
  return art.aborted() ? kAbort : kOk;
}

int cmd_report(const Options& o) {
  const fs::path dir = o.in;
  auto c = nnac::load_config(dir / "config.json");
  std::vector<nnac::ControllerRun> runs;
  for (const char* id : {nnac::kHdlnncId, nnac::kAmpcId}) {
    nnac::ControllerRun run;
    run.controller = id;
    const auto path = dir / (std::string("trace_") + id + ".csv");
    run.trace = nnac::read_trace_csv(path);
    run.aborted = run.trace.size() != static_cast<std::size_t>(c.steps() + 1);
    runs.push_back(std::move(run));
  }
  const auto report = nnac::compute_report(runs, c.icqi_windows);
  const std::vector<std::string> ids{nnac::kHdlnncId, nnac::kAmpcId};
  nnac::emit_report(report, ids, dir);
  bool aborted = false;
  for (const auto& r : runs) aborted = aborted || r.aborted;
  if (!aborted) {
    std::vector<nnac::NamedTrace> named;
    for (const auto& r : runs) named.push_back({r.controller, &r.trace});
    nnac::emit_plots(named, c.plot_ranges, dir);
  }
  std::cout << nnac::format_report_table(report, ids);
  return aborted ? kAbort : kOk;
}

int cmd_dump_config(const Options& o) {
  auto c = resolve_config(o);
  if (o.out.empty()) std::cout << nnac::config_to_json(c).dump(2) << '\n';
  else nnac::save_config(c, o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural adaptive controller workbench (HDLNNC vs AMPC-NPLPT)"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("-v,--verbose", o.verbose, "Log progress");
  const auto scenarios = CLI::IsMember({"a_no_delay", "b_delay", "desk"});

  auto* pretrain = app.add_subcommand("pretrain", "Pretrain the AMPC Elman model and save a JSON snapshot");
  pretrain->add_option("--config", o.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  pretrain->add_option("--scenario", o.scenario, "Built-in scenario")->check(scenarios);
  pretrain->add_option("--out", o.out, "Model snapshot path")->required();
  pretrain->add_option("--seed", o.seed, "RNG seed");
  pretrain->add_option("--mse-target", o.mse_target, "Stop once the training MSE falls to this value");

  auto* run = app.add_subcommand("run", "Run both controllers on a scenario and write artifacts");
  run->add_option("--config", o.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  run->add_option("--scenario", o.scenario, "Built-in scenario")->check(scenarios);
  run->add_option("--seed", o.seed, "RNG seed");
  run->add_option("--out", o.out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Recompute report and plots from a run directory");
  report->add_option("--in", o.in, "Run directory")->required()->check(CLI::ExistingDirectory);

  auto* dump = app.add_subcommand("dump-config", "Print the resolved config as JSON");
  dump->add_option("--config", o.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  dump->add_option("--scenario", o.scenario, "Built-in scenario")->check(scenarios);
  dump->add_option("--seed", o.seed, "RNG seed");
  dump->add_option("--out", o.out, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  spdlog::set_level(o.verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*pretrain) return cmd_pretrain(o);
    if (*run) return cmd_run(o);
    if (*report) return cmd_report(o);
    if (*dump) return cmd_dump_config(o);
  } catch (const nnac::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const nnac::Error& e) {
    std::fprintf(stderr, "aborted: %s\n", e.what());
    return kAbort;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kAbort;
  }
  return kOk;
}
