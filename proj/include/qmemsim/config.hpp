// Copyright 2026 The qmemsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMEMSIM_CONFIG_HPP
#define QMEMSIM_CONFIG_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qmemsim/engine.hpp"

namespace qmemsim {

/// Bad config file, key or value. The message names the offending key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full config tree with every key present (keys sorted).
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Overlays `tree` on the defaults. Unknown keys and type mismatches throw
/// ConfigError; the result is validated.
ExperimentConfig config_from_json(const nlohmann::json& tree);

/// Reads a JSON config file; see config_from_json.
nlohmann::json read_config_tree(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Sets `key=value` (dotted key path) in `tree`. The value is parsed as JSON
/// when possible and taken as a string otherwise.
void apply_override(nlohmann::json& tree, std::string_view assignment);

/// FNV-1a 64 over the canonical (sorted, compact) JSON of the full config,
/// as 16 hex digits.
std::string config_digest(const ExperimentConfig& config);

}  // namespace qmemsim

#endif  // QMEMSIM_CONFIG_HPP
