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

// Permutation-invariant deep-set network rho(phi(r) + phi(s)) and the plain
// six-input network used as the non-invariant ablation baseline. Each model
// predicts one part (real or imaginary) of the pressure at one frequency.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "pipinn/core_types.hpp"
#include "pipinn/diff_engine.hpp"

namespace pipinn {

enum class Activation { tanh, sine };

std::string to_string(Activation activation);
Activation activation_from_string(const std::string& text);

struct MLPSpec {
  std::size_t input_dim = 3;
  std::vector<std::size_t> hidden_widths{128, 128};
  std::size_t output_dim = 1;
  Activation activation = Activation::tanh;

  void validate() const;
  friend bool operator==(const MLPSpec&, const MLPSpec&) = default;
};

// Per-axis affine map of positions into network units: (p - center) / scale.
struct InputNorm {
  Position3 center{0.0, 0.0, 0.0};
  Position3 scale{1.0, 1.0, 1.0};

  // Centre of the box; every axis scaled by the largest half-extent so the
  // box maps into [-1, 1]^3 without distorting its aspect ratio.
  static InputNorm from_box(const DomainBox& box);
  Position3 apply(const Position3& p) const;
  void validate() const;
  friend bool operator==(const InputNorm&, const InputNorm&) = default;
};

struct ModelMeta {
  double frequency = 1.0;
  Part part = Part::real;
  // Network outputs are in units of this pressure scale; predictions multiply it back.
  double target_scale = 1.0;
  friend bool operator==(const ModelMeta&, const ModelMeta&) = default;
};

// A model expressed as a field over (rx, ry, rz, sx, sy, sz) in meters.
struct ModelField {
  diff::ScalarField field;
  std::array<std::size_t, 3> receiver_coords{0, 1, 2};
  std::array<std::size_t, 3> source_coords{3, 4, 5};
};

class DeepSetModel {
 public:
  DeepSetModel(MLPSpec phi, MLPSpec rho, InputNorm norm, ModelMeta meta);

  const MLPSpec& phi_spec() const { return phi_; }
  const MLPSpec& rho_spec() const { return rho_; }
  std::size_t latent_dim() const { return phi_.output_dim; }
  const InputNorm& norm() const { return norm_; }
  const ModelMeta& meta() const { return meta_; }
  ModelMeta& meta() { return meta_; }
  const diff::ParamVector& params() const { return params_; }
  diff::ParamVector& params() { return params_; }
  const ModelField& field() const { return field_; }

 private:
  MLPSpec phi_;
  MLPSpec rho_;
  InputNorm norm_;
  ModelMeta meta_;
  diff::ParamVector params_;
  ModelField field_;
};

class PlainModel {
 public:
  PlainModel(MLPSpec net, InputNorm norm, ModelMeta meta);

  const MLPSpec& net_spec() const { return net_; }
  const InputNorm& norm() const { return norm_; }
  const ModelMeta& meta() const { return meta_; }
  ModelMeta& meta() { return meta_; }
  const diff::ParamVector& params() const { return params_; }
  diff::ParamVector& params() { return params_; }
  const ModelField& field() const { return field_; }

 private:
  MLPSpec net_;
  InputNorm norm_;
  ModelMeta meta_;
  diff::ParamVector params_;
  ModelField field_;
};

using Model = std::variant<DeepSetModel, PlainModel>;

// Glorot-uniform weights, zero biases; reproducible for a given seed.
DeepSetModel init_deepset(const MLPSpec& phi, const MLPSpec& rho, const InputNorm& norm, const ModelMeta& meta,
                          std::uint64_t seed);
PlainModel init_plain(const MLPSpec& net, const InputNorm& norm, const ModelMeta& meta, std::uint64_t seed);

double forward(const DeepSetModel& model, const Position3& r, const Position3& s);
double forward_plain(const PlainModel& model, const Position3& r, const Position3& s);
double forward(const Model& model, const Position3& r, const Position3& s);

// Network outputs for the columns of a 6 x n matrix of (r, s) coordinates.
diff::RowVector forward_batch(const Model& model, const diff::Matrix& pairs);
diff::Matrix pack_pairs(const std::vector<Position3>& receivers, const std::vector<Position3>& sources);

// Pairs a real-part and an imaginary-part model into a physical pressure.
ComplexPressure predict_complex(const Model& real_part, const Model& imag_part, const Position3& r, const Position3& s);

const ModelField& as_scalar_field(const Model& model);
const ModelMeta& meta_of(const Model& model);
ModelMeta& meta_of(Model& model);
const diff::ParamVector& params_of(const Model& model);
diff::ParamVector& params_of(Model& model);
bool is_deepset(const Model& model);

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const Model& model);
Model parse_model(const std::string& text);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);
// Typed loaders: SchemaError when the file holds the other model kind.
DeepSetModel load_deepset(const std::filesystem::path& path);
PlainModel load_plain(const std::filesystem::path& path);

}  // namespace pipinn
