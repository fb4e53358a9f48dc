#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "nnac/scenario.hpp"

// Scenario configs are JSON trees whose keys mirror the ScenarioConfig field
// names. Missing keys keep the values of the base scenario named by "base"
// (default "desk"), so a config file only needs the fields it changes.
namespace nnac {

nlohmann::json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const nlohmann::json& j);

ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace nnac
