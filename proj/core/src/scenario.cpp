#include "nnac/scenario.hpp"

#include <cmath>

#include "nnac/errors.hpp"

namespace nnac {

namespace {

constexpr double kGridSlack = 1e-9;

bool within(const Window& w, double duration) {
  return w.t1 > w.t0 && w.t0 >= -kGridSlack && w.t1 <= duration + kGridSlack;
}

ScenarioConfig scenario_a(const std::string& name, double Ts) {
  ScenarioConfig c;
  c.name = name;
  c.Ts = Ts;
  c.duration = 150.0;
  c.delay_steps = 0;

  ReferenceSpec sine;
  sine.kind = ReferenceKind::sine;
  sine.t_start = 0.0;
  sine.t_end = 100.0;
  ReferenceSpec square;
  square.kind = ReferenceKind::filtered_square;
  square.t_start = 100.0;
  square.t_end = 150.0;
  c.reference = {sine, square};

  c.params = {{0.0, {0.2, 0.8, 1.1}}, {100.0, {-0.2, 1.4, -15.0}}};
  c.icqi_windows = {{0, 8}, {8, 16}, {32, 40}, {88, 96}, {100, 104}, {104, 108}, {116, 120}, {144, 148}};
  c.plot_ranges = {{88, 96}, {144, 148}};
  c.output_directory = "out/" + name;
  c.resolve_defaults();
  return c;
}

ScenarioConfig scenario_b() {
  ScenarioConfig c;
  c.name = "b_delay";
  c.Ts = 0.05;
  c.duration = 400.0;
  c.delay_steps = 10;

  ReferenceSpec sine;
  sine.kind = ReferenceKind::sine;
  sine.t_start = 0.0;
  sine.t_end = 200.0;
  ReferenceSpec square;
  square.kind = ReferenceKind::ramped_square;
  square.t_start = 200.0;
  square.t_end = 400.0;
  c.reference = {sine, square};

  c.params = {{0.0, {0.2, 0.8, 1.1}}, {200.0, {-0.2, 1.4, -15.0}}};

  c.hdlnnc.mlffnn_hidden = {15, 8};
  c.hdlnnc.drnn_hidden = 15;
  c.hdlnnc.cv_limit = 5.0;

  auto& mpc = c.ampc.controller.mpc;
  mpc.N = 30;
  mpc.Nu = 5;
  mpc.lambda = 0.8;
  mpc.max_internal_iters = 20;
  mpc.du_max = 0.035;
  mpc.u_min = -1.0;
  mpc.u_max = 1.0;

  c.icqi_windows = {{0, 8},     {8, 16},    {32, 40},   {88, 96},   {136, 144}, {184, 192},
                    {200, 204}, {204, 208}, {216, 220}, {244, 248}, {320, 324}, {396, 400}};
  c.plot_ranges = {{88, 96}, {244, 248}};
  c.output_directory = "out/b_delay";
  c.resolve_defaults();
  return c;
}

}  // namespace

std::int64_t ScenarioConfig::steps() const { return std::llround(duration / Ts); }

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("scenario name must not be empty");
  if (!(Ts > 0.0) || !std::isfinite(Ts)) throw ConfigError("Ts must be positive");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("duration must be positive");
  const double ratio = duration / Ts;
  if (std::abs(ratio - std::round(ratio)) > 1e-6 * std::max(1.0, ratio))
    throw ConfigError("duration must be a multiple of Ts");
  if (reference.empty()) throw ConfigError("reference needs at least one segment");
  if (std::abs(reference.front().t_start) > kGridSlack)
    throw ConfigError("reference must start at t = 0");
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& s = reference[i];
    if (!(s.t_end > s.t_start)) throw ConfigError("reference segment must have positive length");
    if (i + 1 < reference.size() && std::abs(reference[i + 1].t_start - s.t_end) > kGridSlack)
      throw ConfigError("reference segments must be contiguous");
    if (s.kind != ReferenceKind::sine && !(s.period > 0.0))
      throw ConfigError("square reference period must be positive");
    if (s.kind == ReferenceKind::filtered_square && !(s.filter_time_constant > 0.0))
      throw ConfigError("filter time constant must be positive");
    if (s.kind == ReferenceKind::ramped_square && !(s.ramp_duration >= 0.0 && s.ramp_duration <= s.period / 2))
      throw ConfigError("ramp duration must lie in [0, period/2]");
  }
  if (reference.back().t_end < duration - kGridSlack) throw ConfigError("reference ends before the run");
  (void)ParamSchedule(params);
  for (const auto& w : icqi_windows)
    if (!within(w, duration)) throw ConfigError("ICQI window outside the run");
  for (const auto& w : plot_ranges)
    if (!within(w, duration)) throw ConfigError("plot range outside the run");
  hdlnnc.validate();
  ampc.controller.mpc.validate();
  ampc.controller.online_armijo.validate();
  if (ampc.hidden < 1) throw ConfigError("Elman hidden size must be positive");
  ampc.pretrain.validate();
  if (ampc.pretrain.output_delay != delay_steps || ampc.pretrain.Ts != Ts)
    throw ConfigError("pretraining Ts and delay must match the scenario");
}

void ScenarioConfig::resolve_defaults() {
  hdlnnc.som.max_samples = static_cast<double>(steps());
  ampc.pretrain.Ts = Ts;
  ampc.pretrain.output_delay = delay_steps;
  if (!params.empty()) ampc.pretrain.plant = params.front().params;
}

std::vector<ScenarioConfig> builtin_scenarios() {
  return {scenario_a("a_no_delay", 0.001), scenario_b(), scenario_a("desk", 0.01)};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  for (auto& c : builtin_scenarios())
    if (c.name == name) return c;
  throw ConfigError("unknown scenario '" + name + "' (expected a_no_delay, b_delay or desk)");
}

}  // namespace nnac
