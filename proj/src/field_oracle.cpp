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

#include "pipinn/field_oracle.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <sstream>

#include "json.hpp"
#include "pipinn/io_util.hpp"

namespace pipinn {

using diff::Matrix;
using diff::NodeId;
using diff::ScalarField;
using diff::Vector;

ComplexPressure green_free_field(const Position3& r, const Position3& s, double k) {
  const double d = distance(r, s);
  if (!(d > kMinSourceDistance)) throw SingularityError("receiver coincides with source (d = " + io::shortest(d) + " m)");
  const std::complex<double> phase = std::polar(1.0, -k * d);
  return ComplexPressure(phase / (4.0 * kPi * d));
}

Position3 mirror_in_floor(const Position3& p, double floor_z) { return {p.x, p.y, 2.0 * floor_z - p.z}; }

ComplexPressure green_floor_reflection(const Position3& r, const Position3& s, double k, double floor_z, double beta) {
  if (!(r.z > floor_z) || !(s.z > floor_z)) throw DomainError("positions must lie strictly above the floor");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("reflection coefficient must lie in [0, 1]");
  const auto direct = green_free_field(r, s, k).value();
  const auto image = green_free_field(r, mirror_in_floor(s, floor_z), k).value();
  return ComplexPressure(direct + beta * image);
}

ComplexPressure oracle_pressure(const ScenarioConfig& scenario, const Position3& r, const Position3& s, double k) {
  if (scenario.room_kind == RoomKind::free_field) return green_free_field(r, s, k);
  return green_floor_reflection(r, s, k, scenario.floor_z, scenario.reflection_coeff);
}

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

// cos(k d)/(4 pi d) and -sin(k d)/(4 pi d) nodes for d = |A x + c|.
std::pair<NodeId, NodeId> spherical_wave(ScalarField& f, NodeId coords, const Matrix& diff_map, const Vector& shift, double k,
                                         double weight) {
  const NodeId delta = f.affine(coords, diff_map, shift);
  const NodeId d2 = f.affine(f.mul(delta, delta), Matrix::Ones(1, 3), Vector::Zero(1));
  const NodeId d = f.sqrt(d2);
  const NodeId inv = f.reciprocal(d);
  const NodeId cos_kd = f.sine(f.affine(d, scalar(k), Vector::Constant(1, kPi / 2.0)));
  const NodeId sin_kd = f.sine(f.affine(d, scalar(k), Vector::Zero(1)));
  const double amp = weight / (4.0 * kPi);
  const NodeId re = f.affine(f.mul(cos_kd, inv), scalar(amp), Vector::Zero(1));
  const NodeId im = f.affine(f.mul(sin_kd, inv), scalar(-amp), Vector::Zero(1));
  return {re, im};
}

Matrix direct_map() {
  Matrix m = Matrix::Zero(3, 6);
  m.leftCols(3).setIdentity();
  m.rightCols(3) = -Matrix::Identity(3, 3);
  return m;
}

}  // namespace

OracleField free_field_as_field(double k) {
  OracleField out{ScalarField(6), ScalarField(6)};
  for (int part = 0; part < 2; ++part) {
    ScalarField& f = part == 0 ? out.real : out.imag;
    const NodeId x = f.input({0, 1, 2, 3, 4, 5});
    const auto [re, im] = spherical_wave(f, x, direct_map(), Vector::Zero(3), k, 1.0);
    f.set_output(part == 0 ? re : im);
  }
  return out;
}

OracleField floor_reflection_as_field(double k, double floor_z, double beta) {
  OracleField out{ScalarField(6), ScalarField(6)};
  // r - mirror(s) = (rx - sx, ry - sy, rz + sz - 2 floor_z)
  Matrix image = direct_map();
  image(2, 5) = 1.0;
  Vector shift = Vector::Zero(3);
  shift(2) = -2.0 * floor_z;
  for (int part = 0; part < 2; ++part) {
    ScalarField& f = part == 0 ? out.real : out.imag;
    const NodeId x = f.input({0, 1, 2, 3, 4, 5});
    const auto direct = spherical_wave(f, x, direct_map(), Vector::Zero(3), k, 1.0);
    const auto reflected = spherical_wave(f, x, image, shift, k, beta);
    f.set_output(part == 0 ? f.add(direct.first, reflected.first) : f.add(direct.second, reflected.second));
  }
  return out;
}

OracleField constant_as_field(ComplexPressure value) {
  OracleField out{ScalarField(6), ScalarField(6)};
  out.real.set_output(out.real.constant(Vector::Constant(1, value.re)));
  out.imag.set_output(out.imag.constant(Vector::Constant(1, value.im)));
  return out;
}

HelmholtzResidual helmholtz_residual_numeric(const OracleField& field, const Position3& r, const Position3& s, double k) {
  if (!(distance(r, s) > kMinSourceDistance)) throw SingularityError("residual requested at the source position");
  const std::vector<double> x{r.x, r.y, r.z, s.x, s.y, s.z};
  const std::vector<std::size_t> receiver{0, 1, 2};
  const diff::ParamVector none;
  auto residual = [&](const ScalarField& f) {
    return std::abs(diff::laplacian(f, x, none, receiver) + k * k * diff::eval(f, x, none));
  };
  return {residual(field.real), residual(field.imag)};
}

Split split_from_string(const std::string& text) {
  if (text == "train") return Split::train;
  if (text == "test") return Split::test;
  throw ConfigError("unknown split '" + text + "' (expected train|test)");
}

std::string to_string(Split split) { return split == Split::train ? "train" : "test"; }

ATFDataset synth_dataset(const ScenarioConfig& scenario, Split split) {
  scenario.validate();
  const auto receivers = scenario.receivers();
  const auto sources = scenario.sources();
  const auto& src_idx = split == Split::train ? scenario.train_source_indices : scenario.test_source_indices;
  const auto& rec_idx = split == Split::train ? scenario.train_receiver_indices : scenario.test_receiver_indices;
  ATFDataset ds;
  ds.speed_of_sound = scenario.speed_of_sound;
  ds.label = scenario.label + "/" + to_string(split);
  ds.samples.reserve(scenario.frequencies.size() * src_idx.size() * rec_idx.size());
  for (double f : scenario.frequencies) {
    const double k = wavenumber_of(f, scenario.speed_of_sound);
    for (auto si : src_idx)
      for (auto ri : rec_idx) {
        const auto& r = receivers[ri];
        const auto& s = sources[si];
        if (!(distance(r, s) > kMinSourceDistance))
          throw SingularityError("scenario places receiver " + std::to_string(ri) + " on source " + std::to_string(si));
        ds.samples.push_back({r, s, f, oracle_pressure(scenario, r, s, k)});
      }
  }
  return ds;
}

std::size_t truncated_length(const RIRRecord& rir, double truncation_s) {
  if (!(truncation_s > 0.0)) throw DomainError("truncation length must be > 0");
  if (!(rir.sample_rate > 0.0)) throw DomainError("sample rate must be > 0");
  // The relative nudge keeps exact products such as 0.5 * 44100 from rounding down.
  const double keep = std::floor(truncation_s * rir.sample_rate * (1.0 + 1e-12));
  return std::min(rir.samples.size(), static_cast<std::size_t>(keep));
}

std::vector<ComplexPressure> rir_to_atf(const RIRRecord& rir, const std::vector<double>& frequencies, double truncation_s) {
  if (rir.samples.empty()) throw DomainError("empty impulse response");
  const std::size_t n = truncated_length(rir, truncation_s);
  const double fs = rir.sample_rate;
  std::vector<ComplexPressure> out;
  out.reserve(frequencies.size());
  for (double f : frequencies) {
    if (!(f > 0.0)) throw DomainError("frequencies must be positive");
    if (!(f < fs / 2.0)) throw DomainError("frequency " + io::shortest(f) + " Hz is at or above Nyquist");
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // Reduce f*i modulo fs first so the phase stays accurate for long responses.
      const double cycles = std::fmod(f * static_cast<double>(i), fs) / fs;
      const double angle = 2.0 * kPi * cycles;
      re += rir.samples[i] * std::cos(angle);
      im -= rir.samples[i] * std::sin(angle);
    }
    out.emplace_back(re, im);
  }
  return out;
}

namespace {

std::vector<double> read_rir_csv(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  std::vector<double> samples;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size())
      throw SchemaError(path.string() + ":" + std::to_string(lineno) + ": malformed amplitude");
    samples.push_back(v);
  }
  return samples;
}

}  // namespace

ATFDataset ingest_rir_directory(const std::filesystem::path& manifest_path) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(io::read_file(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("RIR manifest is not valid JSON: " + std::string(e.what()));
  }
  const auto base = manifest_path.parent_path();
  ATFDataset ds;
  try {
    const double fs = manifest.at("sample_rate").get<double>();
    const auto freqs = manifest.at("frequencies").get<std::vector<double>>();
    const double truncation = manifest.value("truncation_s", 0.5);
    ds.speed_of_sound = manifest.value("speed_of_sound", kDefaultSpeedOfSound);
    ds.label = manifest.value("label", manifest_path.stem().string());
    const auto& entries = manifest.at("entries");
    if (!entries.is_array() || entries.empty()) throw SchemaError("RIR manifest lists no entries");
    std::vector<std::vector<ATFSample>> per_frequency(freqs.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& entry = entries[e];
      const auto file = entry.at("file").get<std::string>();
      if (entry.contains("sample_rate") && entry.at("sample_rate").get<double>() != fs)
        throw SchemaError("entry " + std::to_string(e) + " ('" + file + "') has an inconsistent sample rate");
      RIRRecord rir;
      rir.sample_rate = fs;
      rir.receiver = {entry.at("rx").get<double>(), entry.at("ry").get<double>(), entry.at("rz").get<double>()};
      rir.source = {entry.at("sx").get<double>(), entry.at("sy").get<double>(), entry.at("sz").get<double>()};
      try {
        rir.samples = read_rir_csv(base / file);
      } catch (const IoError&) {
        throw IoError("RIR entry " + std::to_string(e) + " ('" + file + "') cannot be read");
      }
      const auto atf = rir_to_atf(rir, freqs, truncation);
      for (std::size_t i = 0; i < freqs.size(); ++i) per_frequency[i].push_back({rir.receiver, rir.source, freqs[i], atf[i]});
    }
    for (auto& block : per_frequency) ds.samples.insert(ds.samples.end(), block.begin(), block.end());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("malformed RIR manifest: " + std::string(e.what()));
  }
  const auto report = validate_dataset(ds);
  if (!report.ok()) throw SchemaError("ingested dataset is invalid: " + report.violations.front());
  return ds;
}

}  // namespace pipinn
