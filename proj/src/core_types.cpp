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

#include "pipinn/core_types.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace pipinn {

std::string to_string(Part part) { return part == Part::real ? "real" : "imag"; }

Part part_from_string(const std::string& text) {
  if (text == "real" || text == "re") return Part::real;
  if (text == "imag" || text == "im") return Part::imag;
  throw ConfigError("unknown part '" + text + "' (expected real|imag)");
}

std::string to_string(RoomKind kind) { return kind == RoomKind::free_field ? "free_field" : "floor_reflection"; }

RoomKind room_kind_from_string(const std::string& text) {
  if (text == "free_field") return RoomKind::free_field;
  if (text == "floor_reflection") return RoomKind::floor_reflection;
  throw ConfigError("unknown room_kind '" + text + "'");
}

std::vector<double> ATFDataset::frequencies() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.frequency);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ATFSample> ATFDataset::at_frequency(double frequency) const {
  std::vector<ATFSample> out;
  for (const auto& s : samples)
    if (s.frequency == frequency) out.push_back(s);
  return out;
}

DomainBox DomainBox::make(const Position3& lo, const Position3& hi) {
  if (!lo.finite() || !hi.finite()) throw DomainError("domain box corners must be finite");
  bool strict = false;
  for (std::size_t a = 0; a < 3; ++a) {
    if (lo[a] > hi[a]) throw DomainError("domain box min_corner exceeds max_corner on axis " + std::to_string(a));
    strict = strict || lo[a] < hi[a];
  }
  if (!strict) throw DomainError("degenerate domain box: zero extent on every axis");
  return DomainBox{lo, hi};
}

DomainBox DomainBox::bounding(const std::vector<Position3>& points) {
  if (points.empty()) throw DomainError("cannot bound an empty point set");
  Position3 lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  return make(lo, hi);
}

bool DomainBox::contains(const Position3& p, double tol) const {
  for (std::size_t a = 0; a < 3; ++a)
    if (p[a] < min_corner[a] - tol || p[a] > max_corner[a] + tol) return false;
  return true;
}

std::vector<std::size_t> DomainBox::spanned_axes() const {
  std::vector<std::size_t> axes;
  for (std::size_t a = 0; a < 3; ++a)
    if (max_corner[a] > min_corner[a]) axes.push_back(a);
  return axes;
}

std::size_t ReceiverGrid::size() const {
  return static_cast<std::size_t>(counts[0]) * static_cast<std::size_t>(counts[1]) * static_cast<std::size_t>(counts[2]);
}

std::vector<Position3> ReceiverGrid::points() const {
  std::vector<Position3> out;
  out.reserve(size());
  for (int l = 0; l < counts[2]; ++l)
    for (int j = 0; j < counts[1]; ++j)
      for (int i = 0; i < counts[0]; ++i)
        out.push_back({corner.x + spacing * i, corner.y + spacing * j, corner.z + spacing * l});
  return out;
}

std::vector<std::size_t> ReceiverGrid::edge_indices() const {
  std::vector<std::size_t> out;
  std::size_t idx = 0;
  for (int l = 0; l < counts[2]; ++l)
    for (int j = 0; j < counts[1]; ++j)
      for (int i = 0; i < counts[0]; ++i, ++idx) {
        const bool x_edge = counts[0] > 1 && (i == 0 || i == counts[0] - 1);
        const bool y_edge = counts[1] > 1 && (j == 0 || j == counts[1] - 1);
        if (x_edge || y_edge) out.push_back(idx);
      }
  return out;
}

std::vector<Position3> SourceCircle::points() const {
  std::vector<Position3> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double angle = 2.0 * kPi * i / count;
    out.push_back({center.x + radius * std::cos(angle), center.y + radius * std::sin(angle), center.z});
  }
  return out;
}

ScenarioConfig ScenarioConfig::measurement_mirror(std::vector<double> frequencies) {
  ScenarioConfig cfg;
  cfg.frequencies = std::move(frequencies);
  for (std::size_t i = 0; i < 60; ++i) (i % 2 == 0 ? cfg.train_source_indices : cfg.test_source_indices).push_back(i);
  cfg.train_receiver_indices = cfg.receiver_grid.edge_indices();
  for (std::size_t i = 0; i < cfg.receiver_grid.size(); ++i) cfg.test_receiver_indices.push_back(i);
  cfg.label = "measurement-mirror";
  return cfg;
}

namespace {

void check_indices(const std::vector<std::size_t>& idx, std::size_t n, const char* what) {
  if (idx.empty()) throw ConfigError(std::string(what) + " is empty");
  for (auto i : idx)
    if (i >= n) throw ConfigError(std::string(what) + " index " + std::to_string(i) + " out of range (" + std::to_string(n) + ")");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(receiver_grid.spacing > 0.0)) throw ConfigError("receiver_grid.spacing must be > 0");
  for (int c : receiver_grid.counts)
    if (c < 1) throw ConfigError("receiver_grid.counts must be >= 1");
  if (!receiver_grid.corner.finite()) throw ConfigError("receiver_grid.corner must be finite");
  if (!(source_circle.radius > 0.0)) throw ConfigError("source_circle.radius must be > 0");
  if (source_circle.count < 1) throw ConfigError("source_circle.count must be >= 1");
  if (!source_circle.center.finite()) throw ConfigError("source_circle.center must be finite");
  check_indices(train_source_indices, static_cast<std::size_t>(source_circle.count), "train_source_indices");
  check_indices(test_source_indices, static_cast<std::size_t>(source_circle.count), "test_source_indices");
  check_indices(train_receiver_indices, receiver_grid.size(), "train_receiver_indices");
  check_indices(test_receiver_indices, receiver_grid.size(), "test_receiver_indices");
  const std::set<std::size_t> train(train_source_indices.begin(), train_source_indices.end());
  for (auto i : test_source_indices)
    if (train.count(i)) throw ConfigError("train and test source sets overlap at index " + std::to_string(i));
  if (frequencies.empty()) throw ConfigError("frequencies is empty");
  for (double f : frequencies)
    if (!(f > 0.0) || !std::isfinite(f)) throw ConfigError("frequencies must be positive and finite");
  if (!(speed_of_sound > 0.0)) throw ConfigError("speed_of_sound must be > 0");
  if (!(reflection_coeff >= 0.0 && reflection_coeff <= 1.0)) throw ConfigError("reflection_coeff must lie in [0, 1]");
  if (room_kind == RoomKind::floor_reflection) {
    for (const auto& p : receivers())
      if (!(p.z > floor_z)) throw ConfigError("receiver at or below floor_z");
    for (const auto& p : sources())
      if (!(p.z > floor_z)) throw ConfigError("source at or below floor_z");
  }
}

DomainBox ScenarioConfig::receiver_domain() const {
  const Position3 far = receiver_grid.corner + receiver_grid.spacing * Position3{double(receiver_grid.counts[0] - 1),
                                                                               double(receiver_grid.counts[1] - 1),
                                                                               double(receiver_grid.counts[2] - 1)};
  return DomainBox::make(receiver_grid.corner, far);
}

DomainBox ScenarioConfig::source_domain() const {
  const auto& c = source_circle.center;
  const double r = source_circle.radius;
  return DomainBox::make({c.x - r, c.y - r, c.z}, {c.x + r, c.y + r, c.z});
}

double wavenumber_of(double frequency, double speed_of_sound) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) throw DomainError("frequency must be positive and finite");
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound)) throw DomainError("speed of sound must be positive and finite");
  return 2.0 * kPi * frequency / speed_of_sound;
}

ValidationReport validate_dataset(const ATFDataset& dataset) {
  ValidationReport report;
  if (dataset.samples.empty()) report.violations.push_back("empty dataset");
  if (!(dataset.speed_of_sound > 0.0) || !std::isfinite(dataset.speed_of_sound))
    report.violations.push_back("non-positive speed of sound");

  using PairKey = std::tuple<double, double, double, double, double, double>;
  std::map<PairKey, std::vector<double>> grid_by_pair;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    const auto& s = dataset.samples[i];
    std::ostringstream where;
    where << " at sample " << i;
    if (!s.receiver.finite() || !s.source.finite() || !s.pressure.finite() || !std::isfinite(s.frequency)) {
      report.violations.push_back("non-finite value" + where.str());
      continue;
    }
    if (!(s.frequency > 0.0)) report.violations.push_back("non-positive frequency" + where.str());
    if (!(distance(s.receiver, s.source) > 0.0)) report.violations.push_back("coincident pair" + where.str());
    grid_by_pair[{s.receiver.x, s.receiver.y, s.receiver.z, s.source.x, s.source.y, s.source.z}].push_back(s.frequency);
  }
  const auto grid = dataset.frequencies();
  for (auto& [key, freqs] : grid_by_pair) {
    std::sort(freqs.begin(), freqs.end());
    if (freqs != grid) {
      report.violations.push_back("inconsistent frequency grid for a receiver/source pair");
      break;
    }
  }
  return report;
}

}  // namespace pipinn
