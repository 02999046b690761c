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

#include "pipinn/json_util.hpp"

#include "pipinn/core_types.hpp"

namespace pipinn {

nlohmann::json parse_config_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(what + ": malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column));
  }
}

void require_object(const nlohmann::json& value, const std::string& what) {
  if (!value.is_object()) throw ConfigError(what + ": expected a JSON object");
}

void reject_unknown_keys(const nlohmann::json& object, std::initializer_list<const char*> allowed, const std::string& what) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(what + ": unknown field '" + item.key() + "'");
  }
}

}  // namespace pipinn
