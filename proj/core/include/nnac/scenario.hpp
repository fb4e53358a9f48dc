#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nnac/ampc/controller.hpp"
#include "nnac/ampc/pretrain.hpp"
#include "nnac/hdlnnc.hpp"
#include "nnac/metrics.hpp"
#include "nnac/plant.hpp"
#include "nnac/reference.hpp"

namespace nnac {

struct AmpcScenarioConfig {
  ampc::AmpcConfig controller;
  Index hidden = 5;
  bool output_feedback = true;
  ampc::PretrainSpec pretrain;
  /// Pretrained model to load; empty means pretrain before the run.
  std::string pretrained_model;
};

struct ScenarioConfig {
  std::string name;
  double Ts = 0.01;
  double duration = 150.0;
  std::size_t delay_steps = 0;
  std::vector<ReferenceSpec> reference;
  std::vector<ParamSwitch> params;
  hdlnnc::HdlnncConfig hdlnnc;
  AmpcScenarioConfig ampc;
  std::uint64_t seed = 1;
  std::string output_directory = "out";
  std::vector<Window> icqi_windows;
  std::vector<Window> plot_ranges;

  std::int64_t steps() const;
  /// Throws ConfigError.
  void validate() const;
  /// Fills derived defaults (SOM K_L, pretraining Ts/delay/plant).
  void resolve_defaults();
};

/// a_no_delay, b_delay and the 10 ms desk variant of a_no_delay.
std::vector<ScenarioConfig> builtin_scenarios();
ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace nnac
