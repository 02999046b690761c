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

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pipinn {

// Error hierarchy. The CLI maps each class onto a fixed exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};
class SchemaError : public Error {
 public:
  using Error::Error;
};
class CoverageError : public Error {
 public:
  using Error::Error;
};
class SingularityError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultSpeedOfSound = 343.0;

struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](std::size_t axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](std::size_t axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend Position3 operator+(const Position3& a, const Position3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Position3 operator-(const Position3& a, const Position3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Position3 operator*(double s, const Position3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Position3&, const Position3&) = default;
};

inline double norm(const Position3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }
inline double distance(const Position3& a, const Position3& b) { return norm(a - b); }

struct ComplexPressure {
  double re = 0.0;
  double im = 0.0;

  ComplexPressure() = default;
  ComplexPressure(double re_, double im_) : re(re_), im(im_) {}
  explicit ComplexPressure(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> value() const { return {re, im}; }
  bool finite() const { return std::isfinite(re) && std::isfinite(im); }
  friend bool operator==(const ComplexPressure&, const ComplexPressure&) = default;
};

// Which half of a complex pressure a scalar model predicts.
enum class Part { real, imag };

std::string to_string(Part part);
Part part_from_string(const std::string& text);

inline double component(const ComplexPressure& p, Part part) { return part == Part::real ? p.re : p.im; }

struct ATFSample {
  Position3 receiver;
  Position3 source;
  double frequency = 0.0;  // Hz
  ComplexPressure pressure;
};

struct ATFDataset {
  std::vector<ATFSample> samples;
  double speed_of_sound = kDefaultSpeedOfSound;
  std::string label;

  // Sorted distinct frequencies present in the samples.
  std::vector<double> frequencies() const;
  // Samples at exactly `frequency`, in dataset order.
  std::vector<ATFSample> at_frequency(double frequency) const;
};

struct DomainBox {
  Position3 min_corner;
  Position3 max_corner;

  // Throws DomainError unless min <= max componentwise with at least one strict axis.
  static DomainBox make(const Position3& min_corner, const Position3& max_corner);
  // Smallest box holding every point (must span at least one axis).
  static DomainBox bounding(const std::vector<Position3>& points);

  bool contains(const Position3& p, double tol = 1e-12) const;
  Position3 center() const { return 0.5 * (min_corner + max_corner); }
  Position3 extent() const { return max_corner - min_corner; }
  // Axes with non-zero extent.
  std::vector<std::size_t> spanned_axes() const;
};

// Regular receiver grid: corner + spacing * (i, j, l).
struct ReceiverGrid {
  Position3 corner{-0.14, -0.14, 0.0};
  double spacing = 0.04;
  std::array<int, 3> counts{8, 8, 1};

  std::size_t size() const;
  std::vector<Position3> points() const;  // x fastest, then y, then z
  // Points on the outer boundary of the grid (perimeter of each planar layer).
  std::vector<std::size_t> edge_indices() const;
};

struct SourceCircle {
  Position3 center{0.0, 0.0, 0.0};
  double radius = 1.5;
  int count = 60;

  // Evenly spaced in the horizontal plane through `center`, starting on +x.
  std::vector<Position3> points() const;
};

enum class RoomKind { free_field, floor_reflection };

std::string to_string(RoomKind kind);
RoomKind room_kind_from_string(const std::string& text);

struct ScenarioConfig {
  ReceiverGrid receiver_grid;
  SourceCircle source_circle;
  std::vector<std::size_t> train_source_indices;
  std::vector<std::size_t> test_source_indices;
  std::vector<std::size_t> train_receiver_indices;
  std::vector<std::size_t> test_receiver_indices;
  std::vector<double> frequencies;
  RoomKind room_kind = RoomKind::free_field;
  double floor_z = -1.2;
  double reflection_coeff = 1.0;
  double speed_of_sound = kDefaultSpeedOfSound;
  std::string label = "scenario";

  // 60 sources on a 1.5 m circle, 8x8 grid at 0.04 m centred on the origin,
  // even sources x edge microphones for training, odd sources x all microphones for testing.
  static ScenarioConfig measurement_mirror(std::vector<double> frequencies);

  // Throws ConfigError describing the first violated invariant.
  void validate() const;

  std::vector<Position3> receivers() const { return receiver_grid.points(); }
  std::vector<Position3> sources() const { return source_circle.points(); }
  DomainBox receiver_domain() const;
  DomainBox source_domain() const;
};

// 2*pi*f/c. Throws DomainError for non-positive input.
double wavenumber_of(double frequency, double speed_of_sound);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_dataset(const ATFDataset& dataset);

}  // namespace pipinn
