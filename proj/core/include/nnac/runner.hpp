#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nnac/ampc/pretrain.hpp"
#include "nnac/metrics.hpp"
#include "nnac/scenario.hpp"

namespace nnac {

inline constexpr const char* kHdlnncId = "HDLNNC";
inline constexpr const char* kAmpcId = "AMPC";

struct ControllerRun {
  std::string controller;
  ControlTrace trace;
  bool aborted = false;
  std::string abort_message;
  std::size_t skipped_updates = 0;
  std::size_t controller_failures = 0;
  /// HDLNNC only: DRNN model error e_mod per trace row.
  std::vector<double> model_error;
};

struct ModelErrorSummary {
  Window window;
  double abs_sum = 0.0;   // sum of |e_mod| over samples with t0 <= t < t1
  std::size_t samples = 0;
};

/// Per-window totals of the DRNN model error recorded in an HDLNNC run.
std::vector<ModelErrorSummary> model_error_by_window(const ControllerRun& run, const std::vector<Window>& windows);

/// Box or rate violation found by the post-run check.
struct ConstraintViolation {
  std::int64_t k = 0;
  std::string what;
};

/// Re-checks u_min <= u <= u_max and |u(k) - u(k-1)| <= du_max (u(-1) = 0) on
/// a recorded trace, with zero tolerance.
std::vector<ConstraintViolation> check_constraints(const ControlTrace& trace,
                                                   const ampc::MpcProblem& problem);

struct RunArtifacts {
  ScenarioConfig config;
  std::vector<ControllerRun> runs;  // HDLNNC, then AMPC
  IcqiReport report;
  std::optional<ampc::PretrainResult> pretraining;
  std::vector<ConstraintViolation> violations;
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  double wall_seconds = 0.0;

  bool aborted() const;
  const ControllerRun& run(const std::string& controller) const;
};

/// Closed loop for one controller over the scenario (measure, control,
/// actuate, record). Aborts are recorded in the returned run.
ControllerRun run_hdlnnc(const ScenarioConfig& config);
ControllerRun run_ampc(const ScenarioConfig& config, const ann::ElmanModel& model);

/// Pretrained model for the scenario: loaded from ampc.pretrained_model or
/// trained from the config.
ampc::PretrainResult prepare_ampc_model(const ScenarioConfig& config);
ann::ElmanModel initial_elman(const ScenarioConfig& config);

/// Runs both controllers, computes the ICQI windows and, when `write` is set,
/// writes traces, report, plots and metadata into config.output_directory.
RunArtifacts run_scenario(const ScenarioConfig& config, bool write = true);

IcqiReport compute_report(const std::vector<ControllerRun>& runs, const std::vector<Window>& windows);

}  // namespace nnac
