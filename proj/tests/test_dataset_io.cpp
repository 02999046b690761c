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

#include <filesystem>

#include "doctest.h"
#include "pipinn/dataset_io.hpp"
#include "pipinn/field_oracle.hpp"
#include "pipinn/io_util.hpp"

using namespace pipinn;

TEST_CASE("dataset round trip is bit exact") {
  auto sc = ScenarioConfig::measurement_mirror({300.0, 1700.0});
  sc.room_kind = RoomKind::floor_reflection;
  const auto ds = synth_dataset(sc, Split::test);
  const auto text = serialize_dataset(ds);
  const auto back = parse_dataset(text);
  REQUIRE(back.samples.size() == ds.samples.size());
  CHECK(back.label == ds.label);
  CHECK(back.speed_of_sound == ds.speed_of_sound);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& a = ds.samples[i];
    const auto& b = back.samples[i];
    REQUIRE(a.receiver.x == b.receiver.x);
    REQUIRE(a.receiver.y == b.receiver.y);
    REQUIRE(a.source.x == b.source.x);
    REQUIRE(a.source.y == b.source.y);
    REQUIRE(a.frequency == b.frequency);
    REQUIRE(a.pressure.re == b.pressure.re);
    REQUIRE(a.pressure.im == b.pressure.im);
  }
  CHECK(serialize_dataset(back) == text);

  const auto path = std::filesystem::temp_directory_path() / "pipinn_ds_test.atf";
  save_dataset(ds, path);
  CHECK(io::checksum(io::read_file(path)) == io::checksum(text));
  CHECK(load_dataset(path).samples.size() == ds.samples.size());
  std::filesystem::remove(path);
}

TEST_CASE("dataset parse errors") {
  ATFDataset ds;
  ds.samples.push_back({{0, 0, 0}, {1, 0, 0}, 500.0, {0.1, -0.2}});
  const auto good = serialize_dataset(ds);
  const auto header_end = good.find('\n');
  const std::string header = good.substr(0, header_end);
  const std::string cols = std::string(kDatasetColumns) + "\n";

  CHECK_THROWS_AS(parse_dataset(""), SchemaError);
  CHECK_THROWS_AS(parse_dataset("{not json\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset(header + "\nrx,ry\n0,0\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset(header + "\n" + cols + "0,0,0,1,0,0,500,0.1\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset(header + "\n" + cols + "0,0,0,1,0,0,500,0.1,x\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset(header + "\n" + cols), SchemaError);
  CHECK_THROWS_AS(parse_dataset(header + "\n" + cols + "0,0,0,1,0,0,500,nan,0\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset(header + "\n" + cols + "0,0,0,0,0,0,500,1,0\n"), SchemaError);
  CHECK_NOTHROW(parse_dataset(good));
}
