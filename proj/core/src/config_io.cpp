#include "nnac/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "nnac/errors.hpp"

namespace nnac {

using nlohmann::json;

namespace {

void expect_keys(const json& j, std::initializer_list<std::string_view> keys, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

json window_list(const std::vector<Window>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back({w.t0, w.t1});
  return a;
}

std::vector<Window> read_windows(const json& j) {
  std::vector<Window> out;
  for (const auto& w : j) {
    if (!w.is_array() || w.size() != 2) throw ConfigError("a window is a [t0, t1] pair");
    out.push_back({w[0].get<double>(), w[1].get<double>()});
  }
  return out;
}

json armijo_json(const ampc::ArmijoParams& a) {
  return {{"eta0", a.eta0}, {"shrink", a.shrink}, {"c", a.c}, {"max_shrinks", a.max_shrinks}};
}

void read_armijo(const json& j, ampc::ArmijoParams& a) {
  expect_keys(j, {"eta0", "shrink", "c", "max_shrinks"}, "armijo");
  read(j, "eta0", a.eta0);
  read(j, "shrink", a.shrink);
  read(j, "c", a.c);
  read(j, "max_shrinks", a.max_shrinks);
}

json reference_json(const ReferenceSpec& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"amplitude", s.amplitude},
          {"angular_frequency", s.angular_frequency},
          {"period", s.period},
          {"low", s.low},
          {"high", s.high},
          {"filter_time_constant", s.filter_time_constant},
          {"ramp_duration", s.ramp_duration},
          {"t_start", s.t_start},
          {"t_end", s.t_end}};
}

ReferenceSpec read_reference(const json& j) {
  expect_keys(j, {"kind", "amplitude", "angular_frequency", "period", "low", "high", "filter_time_constant",
                  "ramp_duration", "t_start", "t_end"},
              "reference segment");
  ReferenceSpec s;
  if (auto it = j.find("kind"); it != j.end()) s.kind = reference_kind_from_string(it->get<std::string>());
  read(j, "amplitude", s.amplitude);
  read(j, "angular_frequency", s.angular_frequency);
  read(j, "period", s.period);
  read(j, "low", s.low);
  read(j, "high", s.high);
  read(j, "filter_time_constant", s.filter_time_constant);
  read(j, "ramp_duration", s.ramp_duration);
  read(j, "t_start", s.t_start);
  read(j, "t_end", s.t_end);
  return s;
}

json mpc_json(const ampc::MpcProblem& p) {
  return {{"N", p.N},           {"Nu", p.Nu},         {"lambda", p.lambda},
          {"u_min", p.u_min},   {"u_max", p.u_max},   {"du_max", p.du_max},
          {"y_min", p.y_min},   {"y_max", p.y_max},   {"max_internal_iters", p.max_internal_iters},
          {"du_tol", p.du_tol}, {"err_tol", p.err_tol}};
}

void read_mpc(const json& j, ampc::MpcProblem& p) {
  expect_keys(j, {"N", "Nu", "lambda", "u_min", "u_max", "du_max", "y_min", "y_max", "max_internal_iters",
                  "du_tol", "err_tol"},
              "ampc.controller.mpc");
  read(j, "N", p.N);
  read(j, "Nu", p.Nu);
  read(j, "lambda", p.lambda);
  read(j, "u_min", p.u_min);
  read(j, "u_max", p.u_max);
  read(j, "du_max", p.du_max);
  read(j, "y_min", p.y_min);
  read(j, "y_max", p.y_max);
  read(j, "max_internal_iters", p.max_internal_iters);
  read(j, "du_tol", p.du_tol);
  read(j, "err_tol", p.err_tol);
}

json hdlnnc_json(const hdlnnc::HdlnncConfig& h) {
  json j = {{"som_width", h.som_width},
            {"feature_width", h.feature_width},
            {"mlffnn_hidden", h.mlffnn_hidden},
            {"lyapunov", {{"alpha", h.lyapunov.alpha}, {"beta", h.lyapunov.beta}, {"phi", h.lyapunov.phi}}},
            {"som", {{"l0", h.som.l0}, {"xi0", h.som.xi0}, {"xi_f", h.som.xi_f}, {"max_samples", h.som.max_samples}}},
            {"hebbian_gamma", h.hebbian_gamma},
            {"hebbian_delta", h.hebbian_delta},
            {"drnn_hidden", h.drnn_hidden}};
  j["cv_limit"] = h.cv_limit ? json(*h.cv_limit) : json(nullptr);
  return j;
}

void read_hdlnnc(const json& j, hdlnnc::HdlnncConfig& h) {
  expect_keys(j, {"som_width", "feature_width", "mlffnn_hidden", "lyapunov", "som", "hebbian_gamma",
                  "hebbian_delta", "cv_limit", "drnn_hidden"},
              "hdlnnc");
  read(j, "som_width", h.som_width);
  read(j, "feature_width", h.feature_width);
  read(j, "mlffnn_hidden", h.mlffnn_hidden);
  if (auto it = j.find("lyapunov"); it != j.end()) {
    expect_keys(*it, {"alpha", "beta", "phi"}, "hdlnnc.lyapunov");
    read(*it, "alpha", h.lyapunov.alpha);
    read(*it, "beta", h.lyapunov.beta);
    read(*it, "phi", h.lyapunov.phi);
  }
  if (auto it = j.find("som"); it != j.end()) {
    expect_keys(*it, {"l0", "xi0", "xi_f", "max_samples"}, "hdlnnc.som");
    read(*it, "l0", h.som.l0);
    read(*it, "xi0", h.som.xi0);
    read(*it, "xi_f", h.som.xi_f);
    read(*it, "max_samples", h.som.max_samples);
  }
  read(j, "hebbian_gamma", h.hebbian_gamma);
  read(j, "hebbian_delta", h.hebbian_delta);
  if (auto it = j.find("cv_limit"); it != j.end()) {
    if (it->is_null()) h.cv_limit.reset();
    else h.cv_limit = it->get<double>();
  }
  read(j, "drnn_hidden", h.drnn_hidden);
}

json ampc_json(const AmpcScenarioConfig& a) {
  const auto& p = a.pretrain;
  return {{"hidden", a.hidden},
          {"output_feedback", a.output_feedback},
          {"pretrained_model", a.pretrained_model},
          {"controller",
           {{"mpc", mpc_json(a.controller.mpc)},
            {"online_armijo", armijo_json(a.controller.online_armijo)},
            {"adapt_online", a.controller.adapt_online}}},
          {"pretrain",
           {{"amplitudes", p.amplitudes},
            {"angular_frequency", p.angular_frequency},
            {"segment_duration", p.segment_duration},
            {"mse_target", p.mse_target},
            {"max_passes", p.max_passes},
            {"memory", p.memory},
            {"armijo", armijo_json(p.armijo)}}}};
}

void read_ampc(const json& j, AmpcScenarioConfig& a) {
  expect_keys(j, {"hidden", "output_feedback", "pretrained_model", "controller", "pretrain"}, "ampc");
  read(j, "hidden", a.hidden);
  read(j, "output_feedback", a.output_feedback);
  read(j, "pretrained_model", a.pretrained_model);
  if (auto it = j.find("controller"); it != j.end()) {
    expect_keys(*it, {"mpc", "online_armijo", "adapt_online"}, "ampc.controller");
    if (auto m = it->find("mpc"); m != it->end()) read_mpc(*m, a.controller.mpc);
    if (auto m = it->find("online_armijo"); m != it->end()) read_armijo(*m, a.controller.online_armijo);
    read(*it, "adapt_online", a.controller.adapt_online);
  }
  if (auto it = j.find("pretrain"); it != j.end()) {
    auto& p = a.pretrain;
    expect_keys(*it, {"amplitudes", "angular_frequency", "segment_duration", "mse_target", "max_passes", "memory",
                      "armijo"},
                "ampc.pretrain");
    read(*it, "amplitudes", p.amplitudes);
    read(*it, "angular_frequency", p.angular_frequency);
    read(*it, "segment_duration", p.segment_duration);
    read(*it, "mse_target", p.mse_target);
    read(*it, "max_passes", p.max_passes);
    read(*it, "memory", p.memory);
    if (auto m = it->find("armijo"); m != it->end()) read_armijo(*m, p.armijo);
  }
}

}  // namespace

json config_to_json(const ScenarioConfig& c) {
  json params = json::array();
  for (const auto& s : c.params)
    params.push_back({{"switch_time", s.switch_time}, {"a1", s.params.a1}, {"a2", s.params.a2}, {"a3", s.params.a3}});
  json reference = json::array();
  for (const auto& s : c.reference) reference.push_back(reference_json(s));
  return {{"name", c.name},
          {"Ts", c.Ts},
          {"duration", c.duration},
          {"delay_steps", c.delay_steps},
          {"reference", reference},
          {"params", params},
          {"hdlnnc", hdlnnc_json(c.hdlnnc)},
          {"ampc", ampc_json(c.ampc)},
          {"seed", c.seed},
          {"output_directory", c.output_directory},
          {"icqi_windows", window_list(c.icqi_windows)},
          {"plot_ranges", window_list(c.plot_ranges)}};
}

ScenarioConfig config_from_json(const json& j) {
  try {
    expect_keys(j, {"base", "name", "Ts", "duration", "delay_steps", "reference", "params", "hdlnnc", "ampc", "seed",
                    "output_directory", "icqi_windows", "plot_ranges"},
                "config");
    ScenarioConfig c = builtin_scenario(j.value("base", std::string("desk")));
    read(j, "name", c.name);
    read(j, "Ts", c.Ts);
    read(j, "duration", c.duration);
    read(j, "delay_steps", c.delay_steps);
    if (auto it = j.find("reference"); it != j.end()) {
      c.reference.clear();
      for (const auto& s : *it) c.reference.push_back(read_reference(s));
    }
    if (auto it = j.find("params"); it != j.end()) {
      c.params.clear();
      for (const auto& s : *it) {
        expect_keys(s, {"switch_time", "a1", "a2", "a3"}, "params entry");
        ParamSwitch p;
        read(s, "switch_time", p.switch_time);
        read(s, "a1", p.params.a1);
        read(s, "a2", p.params.a2);
        read(s, "a3", p.params.a3);
        c.params.push_back(p);
      }
    }
    if (auto it = j.find("hdlnnc"); it != j.end()) read_hdlnnc(*it, c.hdlnnc);
    if (auto it = j.find("ampc"); it != j.end()) read_ampc(*it, c.ampc);
    read(j, "seed", c.seed);
    read(j, "output_directory", c.output_directory);
    if (auto it = j.find("icqi_windows"); it != j.end()) c.icqi_windows = read_windows(*it);
    if (auto it = j.find("plot_ranges"); it != j.end()) c.plot_ranges = read_windows(*it);

    const double k_l = c.hdlnnc.som.max_samples;
    c.resolve_defaults();
    const auto* h = j.contains("hdlnnc") ? &j["hdlnnc"] : nullptr;
    if (h && h->contains("som") && (*h)["som"].contains("max_samples")) c.hdlnnc.som.max_samples = k_l;
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << config_to_json(config).dump(2) << '\n';
}

std::string config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(config).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nnac
