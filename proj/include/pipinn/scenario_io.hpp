/*
 * Copyright 2026 The pipinn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Scenario description files (JSON). Omitted fields take the values of
// ScenarioConfig::measurement_mirror; omitted split index lists are derived
// from the configured geometry (even/odd sources, edge/all receivers).

#include <filesystem>
#include <string>

#include "pipinn/core_types.hpp"

namespace pipinn {

// Throws ConfigError (with line and column for syntax errors) on invalid input.
ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& scenario);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace pipinn
