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

#include "pipinn/dataset_io.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"
#include "pipinn/io_util.hpp"

namespace pipinn {

using json = nlohmann::json;

std::string serialize_dataset(const ATFDataset& dataset) {
  json header = {{"format", "pipinn-atf"},
                 {"format_version", kDatasetFormatVersion},
                 {"speed_of_sound", dataset.speed_of_sound},
                 {"label", dataset.label},
                 {"columns", kDatasetColumns},
                 {"rows", dataset.samples.size()}};
  std::string out = header.dump() + "\n" + kDatasetColumns + "\n";
  out.reserve(out.size() + dataset.samples.size() * 160);
  for (const auto& s : dataset.samples) {
    const double row[9] = {s.receiver.x, s.receiver.y, s.receiver.z, s.source.x,    s.source.y,
                           s.source.z,   s.frequency,  s.pressure.re, s.pressure.im};
    for (int i = 0; i < 9; ++i) {
      if (i) out += ',';
      out += io::shortest(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

double parse_number(std::string_view field, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw SchemaError("line " + std::to_string(line) + ": malformed number '" + std::string(field) + "'");
  return v;
}

}  // namespace

ATFDataset parse_dataset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("dataset file is empty");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("dataset header is not valid JSON: ") + e.what());
  }
  ATFDataset ds;
  std::size_t declared_rows = 0;
  try {
    if (header.value("format", "") != "pipinn-atf") throw SchemaError("not a pipinn ATF dataset");
    if (header.at("format_version").get<int>() != kDatasetFormatVersion) throw SchemaError("unsupported dataset format version");
    if (header.at("columns").get<std::string>() != kDatasetColumns) throw SchemaError("unexpected column schema");
    ds.speed_of_sound = header.at("speed_of_sound").get<double>();
    ds.label = header.value("label", "");
    declared_rows = header.at("rows").get<std::size_t>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed dataset header: ") + e.what());
  }
  if (!std::getline(in, line) || line != kDatasetColumns) throw SchemaError("missing CSV column header");
  std::size_t lineno = 2;
  ds.samples.reserve(declared_rows);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[9];
    std::size_t start = 0;
    for (int i = 0; i < 9; ++i) {
      const auto comma = line.find(',', start);
      const bool last = i == 8;
      if (last != (comma == std::string::npos))
        throw SchemaError("line " + std::to_string(lineno) + ": expected 9 comma-separated fields");
      const auto end = last ? line.size() : comma;
      v[i] = parse_number(std::string_view(line).substr(start, end - start), lineno);
      start = end + 1;
    }
    ds.samples.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6], {v[7], v[8]}});
  }
  if (ds.samples.size() != declared_rows)
    throw SchemaError("row count " + std::to_string(ds.samples.size()) + " does not match header (" + std::to_string(declared_rows) + ")");
  const auto report = validate_dataset(ds);
  if (!report.ok()) throw SchemaError("invalid dataset: " + report.violations.front());
  return ds;
}

void save_dataset(const ATFDataset& dataset, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_dataset(dataset));
}

ATFDataset load_dataset(const std::filesystem::path& path) { return parse_dataset(io::read_file(path)); }

}  // namespace pipinn
