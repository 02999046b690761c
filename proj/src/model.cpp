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

#include "pipinn/model.hpp"

#include <cmath>
#include <random>

#include "json.hpp"
#include "pipinn/io_util.hpp"
#include "pipinn/rng.hpp"

namespace pipinn {

using diff::Matrix;
using diff::NodeId;
using diff::ParamLayout;
using diff::ScalarField;
using diff::Vector;
using json = nlohmann::json;

std::string to_string(Activation activation) { return activation == Activation::tanh ? "tanh" : "sine"; }

Activation activation_from_string(const std::string& text) {
  if (text == "tanh") return Activation::tanh;
  if (text == "sine" || text == "sin") return Activation::sine;
  throw ConfigError("unknown activation '" + text + "'");
}

void MLPSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) throw DomainError("MLP input and output dimensions must be >= 1");
  for (auto w : hidden_widths)
    if (w < 1) throw DomainError("MLP hidden widths must be >= 1");
}

InputNorm InputNorm::from_box(const DomainBox& box) {
  InputNorm n;
  n.center = box.center();
  const Position3 half = 0.5 * box.extent();
  const double s = std::max({half.x, half.y, half.z});
  n.scale = {s, s, s};
  return n;
}

Position3 InputNorm::apply(const Position3& p) const {
  return {(p.x - center.x) / scale.x, (p.y - center.y) / scale.y, (p.z - center.z) / scale.z};
}

void InputNorm::validate() const {
  if (!center.finite() || !scale.finite()) throw DomainError("normalization must be finite");
  if (!(scale.x > 0.0 && scale.y > 0.0 && scale.z > 0.0)) throw DomainError("normalization scales must be > 0");
}

namespace {

std::vector<std::size_t> add_mlp_layout(ParamLayout& layout, const std::string& prefix, const MLPSpec& spec) {
  std::vector<std::size_t> offsets;
  std::size_t in = spec.input_dim;
  std::vector<std::size_t> widths = spec.hidden_widths;
  widths.push_back(spec.output_dim);
  for (std::size_t l = 0; l < widths.size(); ++l) {
    offsets.push_back(layout.add(prefix + ".W" + std::to_string(l), widths[l], in));
    layout.add(prefix + ".b" + std::to_string(l), widths[l], 1);
    in = widths[l];
  }
  return offsets;
}

NodeId apply_mlp(ScalarField& f, NodeId x, const MLPSpec& spec, const std::vector<std::size_t>& offsets) {
  for (std::size_t l = 0; l < offsets.size(); ++l) {
    const std::size_t out = l < spec.hidden_widths.size() ? spec.hidden_widths[l] : spec.output_dim;
    x = f.param_affine(x, out, offsets[l]);
    if (l + 1 < offsets.size()) x = spec.activation == Activation::tanh ? f.tanh(x) : f.sine(x);
  }
  return x;
}

NodeId normalized_input(ScalarField& f, std::vector<std::size_t> coords, const InputNorm& norm) {
  const std::size_t n = coords.size();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Vector c(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t axis = i % 3;
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 / norm.scale[axis];
    c(static_cast<Eigen::Index>(i)) = -norm.center[axis] / norm.scale[axis];
  }
  return f.affine(f.input(std::move(coords)), std::move(m), std::move(c));
}

void glorot_fill(diff::ParamVector& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  params.values.setZero();
  for (const auto& block : params.layout.blocks()) {
    if (block.cols == 1 && block.name.find(".b") != std::string::npos) continue;
    const double limit = std::sqrt(6.0 / static_cast<double>(block.rows + block.cols));
    for (std::size_t i = 0; i < block.size(); ++i)
      params.values(static_cast<Eigen::Index>(block.offset + i)) = (2.0 * unit_uniform(rng) - 1.0) * limit;
  }
}

}  // namespace

DeepSetModel::DeepSetModel(MLPSpec phi, MLPSpec rho, InputNorm norm, ModelMeta meta)
    : phi_(std::move(phi)), rho_(std::move(rho)), norm_(norm), meta_(meta) {
  phi_.validate();
  rho_.validate();
  norm_.validate();
  if (phi_.input_dim != 3) throw DomainError("phi must take 3 inputs");
  if (rho_.output_dim != 1) throw DomainError("rho must produce 1 output");
  if (phi_.output_dim != rho_.input_dim) throw DomainError("phi output width must equal rho input width");
  ParamLayout layout;
  const auto phi_offsets = add_mlp_layout(layout, "phi", phi_);
  const auto rho_offsets = add_mlp_layout(layout, "rho", rho_);
  params_ = diff::ParamVector(layout);

  ScalarField& f = field_.field;
  f = ScalarField(6);
  const NodeId hr = apply_mlp(f, normalized_input(f, {0, 1, 2}, norm_), phi_, phi_offsets);
  const NodeId hs = apply_mlp(f, normalized_input(f, {3, 4, 5}, norm_), phi_, phi_offsets);
  f.set_output(apply_mlp(f, f.add(hr, hs), rho_, rho_offsets));
}

PlainModel::PlainModel(MLPSpec net, InputNorm norm, ModelMeta meta) : net_(std::move(net)), norm_(norm), meta_(meta) {
  net_.validate();
  norm_.validate();
  if (net_.input_dim != 6 || net_.output_dim != 1) throw DomainError("plain network must map 6 inputs to 1 output");
  ParamLayout layout;
  const auto offsets = add_mlp_layout(layout, "net", net_);
  params_ = diff::ParamVector(layout);
  ScalarField& f = field_.field;
  f = ScalarField(6);
  f.set_output(apply_mlp(f, normalized_input(f, {0, 1, 2, 3, 4, 5}, norm_), net_, offsets));
}

DeepSetModel init_deepset(const MLPSpec& phi, const MLPSpec& rho, const InputNorm& norm, const ModelMeta& meta,
                          std::uint64_t seed) {
  DeepSetModel model(phi, rho, norm, meta);
  glorot_fill(model.params(), seed);
  return model;
}

PlainModel init_plain(const MLPSpec& net, const InputNorm& norm, const ModelMeta& meta, std::uint64_t seed) {
  PlainModel model(net, norm, meta);
  glorot_fill(model.params(), seed);
  return model;
}

namespace {

std::array<double, 6> pair_coords(const Position3& r, const Position3& s) { return {r.x, r.y, r.z, s.x, s.y, s.z}; }

}  // namespace

double forward(const DeepSetModel& model, const Position3& r, const Position3& s) {
  const auto x = pair_coords(r, s);
  return diff::eval(model.field().field, x, model.params());
}

double forward_plain(const PlainModel& model, const Position3& r, const Position3& s) {
  const auto x = pair_coords(r, s);
  return diff::eval(model.field().field, x, model.params());
}

double forward(const Model& model, const Position3& r, const Position3& s) {
  return std::visit([&](const auto& m) {
    const auto x = pair_coords(r, s);
    return diff::eval(m.field().field, x, m.params());
  }, model);
}

diff::Matrix pack_pairs(const std::vector<Position3>& receivers, const std::vector<Position3>& sources) {
  if (receivers.size() != sources.size()) throw DomainError("receiver and source lists differ in length");
  Matrix x(6, static_cast<Eigen::Index>(receivers.size()));
  for (std::size_t j = 0; j < receivers.size(); ++j) {
    const auto c = pair_coords(receivers[j], sources[j]);
    for (Eigen::Index i = 0; i < 6; ++i) x(i, static_cast<Eigen::Index>(j)) = c[static_cast<std::size_t>(i)];
  }
  return x;
}

diff::RowVector forward_batch(const Model& model, const diff::Matrix& pairs) {
  diff::Tape tape;
  return std::visit([&](const auto& m) { return diff::forward(m.field().field, pairs, m.params().values, {}, tape).value; }, model);
}

ComplexPressure predict_complex(const Model& real_part, const Model& imag_part, const Position3& r, const Position3& s) {
  const auto& mr = meta_of(real_part);
  const auto& mi = meta_of(imag_part);
  if (mr.frequency != mi.frequency) throw DomainError("real and imaginary models disagree on frequency");
  return {mr.target_scale * forward(real_part, r, s), mi.target_scale * forward(imag_part, r, s)};
}

const ModelField& as_scalar_field(const Model& model) {
  return std::visit([](const auto& m) -> const ModelField& { return m.field(); }, model);
}
const ModelMeta& meta_of(const Model& model) {
  return std::visit([](const auto& m) -> const ModelMeta& { return m.meta(); }, model);
}
ModelMeta& meta_of(Model& model) {
  return std::visit([](auto& m) -> ModelMeta& { return m.meta(); }, model);
}
const diff::ParamVector& params_of(const Model& model) {
  return std::visit([](const auto& m) -> const diff::ParamVector& { return m.params(); }, model);
}
diff::ParamVector& params_of(Model& model) {
  return std::visit([](auto& m) -> diff::ParamVector& { return m.params(); }, model);
}
bool is_deepset(const Model& model) { return std::holds_alternative<DeepSetModel>(model); }

// ---------------------------------------------------------------------------
// Serialization

namespace {

json spec_json(const MLPSpec& s) {
  return {{"input_dim", s.input_dim}, {"hidden_widths", s.hidden_widths}, {"output_dim", s.output_dim},
          {"activation", to_string(s.activation)}};
}

MLPSpec spec_from(const json& j) {
  MLPSpec s;
  s.input_dim = j.at("input_dim").get<std::size_t>();
  s.hidden_widths = j.at("hidden_widths").get<std::vector<std::size_t>>();
  s.output_dim = j.at("output_dim").get<std::size_t>();
  s.activation = activation_from_string(j.at("activation").get<std::string>());
  return s;
}

json pos_json(const Position3& p) { return json::array({p.x, p.y, p.z}); }
Position3 pos_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw SchemaError("expected a 3-element position");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json common_json(const InputNorm& norm, const ModelMeta& meta, const diff::ParamVector& params) {
  json p = json::array();
  for (Eigen::Index i = 0; i < params.values.size(); ++i) p.push_back(io::hex_double(params.values(i)));
  return {{"norm", {{"center", pos_json(norm.center)}, {"scale", pos_json(norm.scale)}}},
          {"meta", {{"frequency", meta.frequency}, {"part", to_string(meta.part)}, {"target_scale", meta.target_scale}}},
          {"param_count", params.values.size()},
          {"params", std::move(p)}};
}

template <typename M>
void fill_common(M& model, const json& j) {
  auto& params = model.params();
  const auto& p = j.at("params");
  if (!p.is_array() || p.size() != params.size() || j.at("param_count").get<std::size_t>() != params.size())
    throw SchemaError("parameter count does not match the declared architecture");
  for (std::size_t i = 0; i < p.size(); ++i) params.values(static_cast<Eigen::Index>(i)) = io::parse_hex_double(p[i].get<std::string>());
}

InputNorm norm_from(const json& j) { return {pos_from(j.at("center")), pos_from(j.at("scale"))}; }

ModelMeta meta_from(const json& j) {
  ModelMeta m;
  m.frequency = j.at("frequency").get<double>();
  m.part = part_from_string(j.at("part").get<std::string>());
  m.target_scale = j.at("target_scale").get<double>();
  return m;
}

}  // namespace

std::string serialize_model(const Model& model) {
  json j;
  j["format"] = "pipinn-model";
  j["format_version"] = kModelFormatVersion;
  if (const auto* d = std::get_if<DeepSetModel>(&model)) {
    j["kind"] = "deepset";
    j["phi"] = spec_json(d->phi_spec());
    j["rho"] = spec_json(d->rho_spec());
    j.update(common_json(d->norm(), d->meta(), d->params()));
  } else {
    const auto& p = std::get<PlainModel>(model);
    j["kind"] = "plain";
    j["net"] = spec_json(p.net_spec());
    j.update(common_json(p.norm(), p.meta(), p.params()));
  }
  return j.dump(1) + "\n";
}

Model parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != "pipinn-model") throw SchemaError("not a pipinn model file");
    if (j.at("format_version").get<int>() != kModelFormatVersion)
      throw SchemaError("unsupported model format version " + j.at("format_version").dump());
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "deepset") {
      DeepSetModel m(spec_from(j.at("phi")), spec_from(j.at("rho")), norm_from(j.at("norm")), meta_from(j.at("meta")));
      fill_common(m, j);
      return m;
    }
    if (kind == "plain") {
      PlainModel m(spec_from(j.at("net")), norm_from(j.at("norm")), meta_from(j.at("meta")));
      fill_common(m, j);
      return m;
    }
    throw SchemaError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  } catch (const DomainError& e) {
    throw SchemaError(std::string("inconsistent model file: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) { io::write_file_atomic(path, serialize_model(model)); }

Model load_model(const std::filesystem::path& path) { return parse_model(io::read_file(path)); }

DeepSetModel load_deepset(const std::filesystem::path& path) {
  auto m = load_model(path);
  if (!is_deepset(m)) throw SchemaError("'" + path.string() + "' holds a plain model, expected a deep-set model");
  return std::get<DeepSetModel>(std::move(m));
}

PlainModel load_plain(const std::filesystem::path& path) {
  auto m = load_model(path);
  if (is_deepset(m)) throw SchemaError("'" + path.string() + "' holds a deep-set model, expected a plain model");
  return std::get<PlainModel>(std::move(m));
}

}  // namespace pipinn
