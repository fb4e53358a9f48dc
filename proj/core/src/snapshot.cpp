#include "nnac/ann/snapshot.hpp"

#include <fstream>

#include "nnac/errors.hpp"

namespace nnac::ann {

using nlohmann::json;

namespace {

void expect_kind(const json& j, const char* kind) {
  if (j.value("kind", std::string{}) != kind)
    throw ConfigError(std::string("snapshot: expected kind '") + kind + "'");
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
    throw ConfigError("snapshot: matrix data does not match rows x cols");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)].get<double>();
  return m;
}

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

Vector vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

void to_json(json& j, const DenseLayer& layer) {
  j = {{"kind", "dense"},
       {"activation", to_string(layer.activation)},
       {"weights", matrix_to_json(layer.weights)}};
}

void from_json(const json& j, DenseLayer& layer) {
  expect_kind(j, "dense");
  layer.activation = activation_from_string(j.at("activation").get<std::string>());
  layer.weights = matrix_from_json(j.at("weights"));
}

void to_json(json& j, const SomLayer& layer) {
  j = {{"kind", "som"},
       {"weights", matrix_to_json(layer.weights)},
       {"l0", layer.schedule.l0},
       {"xi0", layer.schedule.xi0},
       {"xi_f", layer.schedule.xi_f},
       {"max_samples", layer.schedule.max_samples}};
}

void from_json(const json& j, SomLayer& layer) {
  expect_kind(j, "som");
  layer.weights = matrix_from_json(j.at("weights"));
  layer.schedule = {j.at("l0").get<double>(), j.at("xi0").get<double>(), j.at("xi_f").get<double>(),
                    j.at("max_samples").get<double>()};
}

void to_json(json& j, const HebbianLayer& layer) {
  j = {{"kind", "hebbian"},
       {"weights", matrix_to_json(layer.weights)},
       {"gamma", layer.gamma},
       {"delta", layer.delta}};
}

void from_json(const json& j, HebbianLayer& layer) {
  expect_kind(j, "hebbian");
  layer.weights = matrix_from_json(j.at("weights"));
  layer.gamma = j.at("gamma").get<double>();
  layer.delta = j.at("delta").get<double>();
}

void to_json(json& j, const DrnnModel& model) {
  j = {{"kind", "drnn"},
       {"inputs", model.inputs()},
       {"hidden_size", model.hidden_size()},
       {"input_weights", matrix_to_json(model.input_weights)},
       {"diagonal_weights", vector_to_json(model.diagonal_weights)},
       {"output_weights", vector_to_json(model.output_weights)},
       {"hidden", vector_to_json(model.hidden)}};
}

void from_json(const json& j, DrnnModel& model) {
  expect_kind(j, "drnn");
  model.input_weights = matrix_from_json(j.at("input_weights"));
  model.diagonal_weights = vector_from_json(j.at("diagonal_weights"));
  model.output_weights = vector_from_json(j.at("output_weights"));
  model.hidden = vector_from_json(j.at("hidden"));
  const Index h = model.output_weights.size();
  if (model.input_weights.rows() != h || model.diagonal_weights.size() != h || model.hidden.size() != h)
    throw ConfigError("snapshot: inconsistent DRNN dimensions");
}

void to_json(json& j, const ElmanModel& model) {
  j = {{"kind", "elman"},
       {"inputs", model.inputs()},
       {"hidden_size", model.hidden_size()},
       {"activation", to_string(model.activation)},
       {"input_delay", model.input_delay()},
       {"input_weights", matrix_to_json(model.input_weights)},
       {"context_weights", matrix_to_json(model.context_weights)},
       {"output_weights", vector_to_json(model.output_weights)},
       {"context", vector_to_json(model.context)},
       {"delay_buffer", model.control_delay.contents()}};
}

void from_json(const json& j, ElmanModel& model) {
  expect_kind(j, "elman");
  model.activation = activation_from_string(j.at("activation").get<std::string>());
  model.input_weights = matrix_from_json(j.at("input_weights"));
  model.context_weights = matrix_from_json(j.at("context_weights"));
  model.output_weights = vector_from_json(j.at("output_weights"));
  model.context = vector_from_json(j.at("context"));
  const auto delay = j.at("input_delay").get<std::size_t>();
  auto buffer = j.value("delay_buffer", std::vector<double>(delay, 0.0));
  if (buffer.size() != delay) throw ConfigError("snapshot: delay buffer length != input_delay");
  model.control_delay.assign(buffer);
  const Index h = model.output_weights.size();
  if (model.input_weights.rows() != h || model.context_weights.rows() != h ||
      model.context_weights.cols() != h || model.context.size() != h || model.input_weights.cols() < 1)
    throw ConfigError("snapshot: inconsistent Elman dimensions");
}

void save_elman(const ElmanModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model snapshot " + path.string());
  out << json(model).dump(2) << '\n';
}

ElmanModel load_elman(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read model snapshot " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("model snapshot " + path.string() + ": " + e.what());
  }
  return j.get<ElmanModel>();
}

}  // namespace nnac::ann
