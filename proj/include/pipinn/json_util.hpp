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

// Helpers for JSON configuration documents. Failures raise ConfigError.

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "pipinn/core_types.hpp"

namespace pipinn {

// Parses `text`; syntax errors are reported with line and column.
nlohmann::json parse_config_json(const std::string& text, const std::string& what);

void require_object(const nlohmann::json& value, const std::string& what);
void reject_unknown_keys(const nlohmann::json& object, std::initializer_list<const char*> allowed, const std::string& what);

// Reads object[key] into `out` when present; type mismatches become ConfigError.
template <typename T>
void read_optional(const nlohmann::json& object, const char* key, T& out, const std::string& what) {
  if (!object.contains(key)) return;
  try {
    out = object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(what + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace pipinn
