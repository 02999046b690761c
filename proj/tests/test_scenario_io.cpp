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

#include <string>

#include "doctest.h"
#include "pipinn/field_oracle.hpp"
#include "pipinn/scenario_io.hpp"

using namespace pipinn;

TEST_CASE("minimal scenario equals the measurement mirror") {
  const auto c = scenario_from_json(R"({"frequencies": [500, 1000, 1500]})");
  const auto m = ScenarioConfig::measurement_mirror({500, 1000, 1500});
  CHECK(c.train_source_indices == m.train_source_indices);
  CHECK(c.test_source_indices == m.test_source_indices);
  CHECK(c.train_receiver_indices == m.train_receiver_indices);
  CHECK(c.test_receiver_indices == m.test_receiver_indices);
  CHECK(c.receivers() == m.receivers());
  CHECK(c.sources() == m.sources());
  CHECK(synth_dataset(c, Split::test).samples.size() == 3 * 1920);
}

TEST_CASE("scenario round trip") {
  auto m = ScenarioConfig::measurement_mirror({700});
  m.room_kind = RoomKind::floor_reflection;
  m.reflection_coeff = 0.5;
  m.receiver_grid.counts = {4, 3, 1};
  m.train_receiver_indices = {0, 1, 2};
  m.test_receiver_indices = {3, 4};
  m.label = "custom";
  const auto text = scenario_to_json(m);
  const auto back = scenario_from_json(text);
  CHECK(scenario_to_json(back) == text);
  CHECK(back.room_kind == RoomKind::floor_reflection);
  CHECK(back.test_receiver_indices == m.test_receiver_indices);
}

TEST_CASE("derived splits follow the geometry") {
  const auto c = scenario_from_json(R"({"frequencies": [500], "source_circle": {"count": 6},
                                        "receiver_grid": {"counts": [3, 3, 1]}})");
  CHECK(c.train_source_indices == std::vector<std::size_t>{0, 2, 4});
  CHECK(c.test_source_indices == std::vector<std::size_t>{1, 3, 5});
  CHECK(c.train_receiver_indices.size() == 8);
  CHECK(c.test_receiver_indices.size() == 9);
}

TEST_CASE("scenario errors") {
  try {
    scenario_from_json("{\n  \"frequencies\": [500,\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(scenario_from_json(R"({"frequencies": []})"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(R"({"frequencies": [500], "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(R"({"frequencies": "500"})"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(R"({"frequencies": [500], "room": "cave"})"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(R"({"frequencies": [500], "train_sources": [60]})"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(R"({"frequencies": [500], "receiver_grid": {"corner": [0, 0]}})"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);
}
