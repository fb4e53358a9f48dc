#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "nnac/ann/dense.hpp"
#include "nnac/ann/drnn.hpp"
#include "nnac/ann/elman.hpp"
#include "nnac/ann/hebbian.hpp"
#include "nnac/ann/som.hpp"

// JSON snapshots of network records. Matrices are stored as
// {"rows": r, "cols": c, "data": [row-major values]}; doubles are written with
// round-trip precision so a reload reproduces the weights bit for bit.
namespace nnac::ann {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const DenseLayer& layer);
void from_json(const nlohmann::json& j, DenseLayer& layer);
void to_json(nlohmann::json& j, const SomLayer& layer);
void from_json(const nlohmann::json& j, SomLayer& layer);
void to_json(nlohmann::json& j, const HebbianLayer& layer);
void from_json(const nlohmann::json& j, HebbianLayer& layer);
void to_json(nlohmann::json& j, const DrnnModel& model);
void from_json(const nlohmann::json& j, DrnnModel& model);
void to_json(nlohmann::json& j, const ElmanModel& model);
void from_json(const nlohmann::json& j, ElmanModel& model);

void save_elman(const ElmanModel& model, const std::filesystem::path& path);
ElmanModel load_elman(const std::filesystem::path& path);

}  // namespace nnac::ann
