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

#include "pipinn/scenario_io.hpp"

#include "pipinn/io_util.hpp"
#include "pipinn/json_util.hpp"

namespace pipinn {

namespace {

const std::string kWhat = "scenario";

Position3 read_position(const nlohmann::json& object, const char* key, Position3 fallback) {
  std::vector<double> v;
  read_optional(object, key, v, kWhat);
  if (!object.contains(key)) return fallback;
  if (v.size() != 3) throw ConfigError(kWhat + ": field '" + key + "' must have 3 elements");
  return {v[0], v[1], v[2]};
}

nlohmann::json position_json(const Position3& p) { return nlohmann::json::array({p.x, p.y, p.z}); }

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
  const auto j = parse_config_json(text, kWhat);
  require_object(j, kWhat);
  reject_unknown_keys(j,
                      {"label", "frequencies", "speed_of_sound", "room", "floor_z", "reflection_coeff", "receiver_grid",
                       "source_circle", "train_sources", "test_sources", "train_receivers", "test_receivers"},
                      kWhat);
  ScenarioConfig c = ScenarioConfig::measurement_mirror({});
  c.train_source_indices.clear();
  c.test_source_indices.clear();
  c.train_receiver_indices.clear();
  c.test_receiver_indices.clear();

  read_optional(j, "label", c.label, kWhat);
  read_optional(j, "frequencies", c.frequencies, kWhat);
  read_optional(j, "speed_of_sound", c.speed_of_sound, kWhat);
  read_optional(j, "floor_z", c.floor_z, kWhat);
  read_optional(j, "reflection_coeff", c.reflection_coeff, kWhat);
  std::string room;
  read_optional(j, "room", room, kWhat);
  if (!room.empty()) c.room_kind = room_kind_from_string(room);

  if (j.contains("receiver_grid")) {
    const auto& g = j.at("receiver_grid");
    require_object(g, kWhat + ".receiver_grid");
    reject_unknown_keys(g, {"corner", "spacing", "counts"}, kWhat + ".receiver_grid");
    c.receiver_grid.corner = read_position(g, "corner", c.receiver_grid.corner);
    read_optional(g, "spacing", c.receiver_grid.spacing, kWhat);
    std::vector<int> counts;
    read_optional(g, "counts", counts, kWhat);
    if (g.contains("counts")) {
      if (counts.size() != 3) throw ConfigError(kWhat + ": field 'counts' must have 3 elements");
      c.receiver_grid.counts = {counts[0], counts[1], counts[2]};
    }
  }
  if (j.contains("source_circle")) {
    const auto& s = j.at("source_circle");
    require_object(s, kWhat + ".source_circle");
    reject_unknown_keys(s, {"center", "radius", "count"}, kWhat + ".source_circle");
    c.source_circle.center = read_position(s, "center", c.source_circle.center);
    read_optional(s, "radius", c.source_circle.radius, kWhat);
    read_optional(s, "count", c.source_circle.count, kWhat);
  }

  read_optional(j, "train_sources", c.train_source_indices, kWhat);
  read_optional(j, "test_sources", c.test_source_indices, kWhat);
  read_optional(j, "train_receivers", c.train_receiver_indices, kWhat);
  read_optional(j, "test_receivers", c.test_receiver_indices, kWhat);
  if (!j.contains("train_sources") || !j.contains("test_sources")) {
    std::vector<std::size_t> even, odd;
    for (int i = 0; i < std::max(c.source_circle.count, 0); ++i)
      (i % 2 == 0 ? even : odd).push_back(static_cast<std::size_t>(i));
    if (!j.contains("train_sources")) c.train_source_indices = even;
    if (!j.contains("test_sources")) c.test_source_indices = odd;
  }
  bool grid_ok = true;
  for (int n : c.receiver_grid.counts) grid_ok = grid_ok && n >= 1;
  if (grid_ok && !j.contains("train_receivers")) c.train_receiver_indices = c.receiver_grid.edge_indices();
  if (grid_ok && !j.contains("test_receivers"))
    for (std::size_t i = 0; i < c.receiver_grid.size(); ++i) c.test_receiver_indices.push_back(i);

  c.validate();
  return c;
}

std::string scenario_to_json(const ScenarioConfig& c) {
  const auto& g = c.receiver_grid;
  nlohmann::json j = {
      {"label", c.label},
      {"frequencies", c.frequencies},
      {"speed_of_sound", c.speed_of_sound},
      {"room", to_string(c.room_kind)},
      {"floor_z", c.floor_z},
      {"reflection_coeff", c.reflection_coeff},
      {"receiver_grid", {{"corner", position_json(g.corner)}, {"spacing", g.spacing}, {"counts", g.counts}}},
      {"source_circle",
       {{"center", position_json(c.source_circle.center)}, {"radius", c.source_circle.radius}, {"count", c.source_circle.count}}},
      {"train_sources", c.train_source_indices},
      {"test_sources", c.test_source_indices},
      {"train_receivers", c.train_receiver_indices},
      {"test_receivers", c.test_receiver_indices}};
  return j.dump(2) + "\n";
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return scenario_from_json(io::read_file(path)); }

}  // namespace pipinn
