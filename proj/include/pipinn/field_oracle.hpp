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

// Closed-form sound fields used as ground truth, dataset synthesis for a
// scenario, and conversion of room impulse responses to transfer functions.
//
// Time convention is exp(+j*omega*t), so an outgoing wave is exp(-j*k*d).

#include <filesystem>
#include <vector>

#include "pipinn/core_types.hpp"
#include "pipinn/diff_engine.hpp"

namespace pipinn {

// Oracle evaluations closer than this to the source are refused.
inline constexpr double kMinSourceDistance = 1e-6;

ComplexPressure green_free_field(const Position3& r, const Position3& s, double k);

Position3 mirror_in_floor(const Position3& p, double floor_z);

// Free field plus one image source mirrored in the plane z = floor_z.
ComplexPressure green_floor_reflection(const Position3& r, const Position3& s, double k, double floor_z, double beta);

// The scenario's configured environment at wavenumber k.
ComplexPressure oracle_pressure(const ScenarioConfig& scenario, const Position3& r, const Position3& s, double k);

// Real and imaginary parts of an oracle as fields over (rx, ry, rz, sx, sy, sz).
struct OracleField {
  diff::ScalarField real;
  diff::ScalarField imag;
};

OracleField free_field_as_field(double k);
OracleField floor_reflection_as_field(double k, double floor_z, double beta);
OracleField constant_as_field(ComplexPressure value);

struct HelmholtzResidual {
  double real = 0.0;
  double imag = 0.0;
};

// |lap_r P + k^2 P| for each part, with the Laplacian taken by the engine
// over the receiver coordinates.
HelmholtzResidual helmholtz_residual_numeric(const OracleField& field, const Position3& r, const Position3& s, double k);

enum class Split { train, test };
Split split_from_string(const std::string& text);
std::string to_string(Split split);

// Train: train sources x train receivers. Test: test sources x test receivers.
// Ordered by frequency, then source, then receiver.
ATFDataset synth_dataset(const ScenarioConfig& scenario, Split split);

struct RIRRecord {
  std::vector<double> samples;
  double sample_rate = 0.0;
  Position3 receiver;
  Position3 source;
};

// Number of leading samples kept when truncating to `truncation_s` seconds.
std::size_t truncated_length(const RIRRecord& rir, double truncation_s);

// Direct Fourier sums of the truncated response at each requested frequency.
std::vector<ComplexPressure> rir_to_atf(const RIRRecord& rir, const std::vector<double>& frequencies, double truncation_s);

// Reads a JSON manifest of RIR CSV files and converts every record.
ATFDataset ingest_rir_directory(const std::filesystem::path& manifest_path);

}  // namespace pipinn
