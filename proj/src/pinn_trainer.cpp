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

#include "pipinn/pinn_trainer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "pipinn/io_util.hpp"
#include "pipinn/json_util.hpp"
#include "pipinn/rng.hpp"

namespace pipinn {

using diff::Matrix;
using diff::RowVector;
using diff::Vector;

namespace {

template <typename E>
E parse_enum(const std::string& text, std::initializer_list<std::pair<const char*, E>> options, const char* what) {
  std::string expected;
  for (const auto& [name, value] : options) {
    if (text == name) return value;
    expected += expected.empty() ? name : std::string("|") + name;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + text + "' (expected " + expected + ")");
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::no_pde: return "no_pde";
    case Variant::plain_pinn: return "plain_pinn";
    case Variant::plain: return "plain";
  }
  return "?";
}
std::string to_string(LaplacianMode m) {
  switch (m) {
    case LaplacianMode::receiver: return "receiver";
    case LaplacianMode::source: return "source";
    case LaplacianMode::both_averaged: return "both_averaged";
  }
  return "?";
}
std::string to_string(LaplacianAxes a) { return a == LaplacianAxes::spanned ? "spanned" : "all"; }
std::string to_string(PdeNormalization n) { return n == PdeNormalization::physical ? "physical" : "wavenumber"; }

Variant variant_from_string(const std::string& text) {
  return parse_enum<Variant>(text,
                             {{"full", Variant::full}, {"no_pde", Variant::no_pde}, {"plain_pinn", Variant::plain_pinn},
                              {"plain", Variant::plain}},
                             "variant");
}
LaplacianMode laplacian_mode_from_string(const std::string& text) {
  return parse_enum<LaplacianMode>(
      text,
      {{"receiver", LaplacianMode::receiver}, {"source", LaplacianMode::source}, {"both_averaged", LaplacianMode::both_averaged}},
      "laplacian mode");
}
LaplacianAxes laplacian_axes_from_string(const std::string& text) {
  return parse_enum<LaplacianAxes>(text, {{"spanned", LaplacianAxes::spanned}, {"all", LaplacianAxes::all}}, "laplacian axes");
}
PdeNormalization pde_normalization_from_string(const std::string& text) {
  return parse_enum<PdeNormalization>(
      text, {{"physical", PdeNormalization::physical}, {"wavenumber", PdeNormalization::wavenumber}}, "pde normalization");
}

bool uses_pde(Variant v) { return v == Variant::full || v == Variant::plain_pinn; }
bool uses_deepset(Variant v) { return v == Variant::full || v == Variant::no_pde; }

// ---------------------------------------------------------------------------
// Collocation

TrainDomains TrainDomains::from_scenario(const ScenarioConfig& scenario) {
  return {scenario.receiver_domain(), scenario.source_domain(), scenario.source_circle};
}

TrainDomains TrainDomains::from_dataset(const ATFDataset& dataset) {
  std::vector<Position3> r, s;
  r.reserve(dataset.samples.size());
  s.reserve(dataset.samples.size());
  for (const auto& smp : dataset.samples) {
    r.push_back(smp.receiver);
    s.push_back(smp.source);
  }
  return {DomainBox::bounding(r), DomainBox::bounding(s), std::nullopt};
}

CollocationSet CollocationSet::mirrored() const {
  CollocationSet m = *this;
  std::swap(m.receivers, m.sources);
  std::swap(m.omega_r, m.omega_s);
  return m;
}

namespace {

Position3 uniform_in(const DomainBox& box, std::mt19937_64& rng) {
  Position3 p;
  for (std::size_t a = 0; a < 3; ++a) {
    const double lo = box.min_corner[a], hi = box.max_corner[a];
    p[a] = lo == hi ? lo : std::min(hi, lo + (hi - lo) * unit_uniform(rng));
  }
  return p;
}

void check_box(const DomainBox& box, const char* what) {
  (void)DomainBox::make(box.min_corner, box.max_corner);
  if (!box.min_corner.finite() || !box.max_corner.finite()) throw DomainError(std::string(what) + " is not finite");
}

}  // namespace

CollocationSet sample_collocation(const DomainBox& omega_r, const DomainBox& omega_s, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("collocation set must hold at least one point");
  check_box(omega_r, "receiver domain");
  check_box(omega_s, "source domain");
  std::mt19937_64 rng(seed);
  CollocationSet set;
  set.seed = seed;
  set.omega_r = omega_r;
  set.omega_s = omega_s;
  set.receivers.reserve(n);
  set.sources.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    set.receivers.push_back(uniform_in(omega_r, rng));
    set.sources.push_back(uniform_in(omega_s, rng));
  }
  return set;
}

CollocationSet sample_collocation(const TrainDomains& domains, std::size_t n, std::uint64_t seed) {
  if (!domains.source_circle) return sample_collocation(domains.receivers, domains.sources, n, seed);
  if (n == 0) throw DomainError("collocation set must hold at least one point");
  check_box(domains.receivers, "receiver domain");
  const SourceCircle& c = *domains.source_circle;
  if (!(c.radius > 0.0)) throw DomainError("source circle radius must be > 0");
  std::mt19937_64 rng(seed);
  CollocationSet set;
  set.seed = seed;
  set.omega_r = domains.receivers;
  set.omega_s = DomainBox::make({c.center.x - c.radius, c.center.y - c.radius, c.center.z},
                                {c.center.x + c.radius, c.center.y + c.radius, c.center.z});
  for (std::size_t i = 0; i < n; ++i) {
    set.receivers.push_back(uniform_in(domains.receivers, rng));
    const double angle = 2.0 * kPi * unit_uniform(rng);
    set.sources.push_back({c.center.x + c.radius * std::cos(angle), c.center.y + c.radius * std::sin(angle), c.center.z});
  }
  return set;
}

// ---------------------------------------------------------------------------
// Configuration

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("moment decays must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (n_pde < 1) throw ConfigError("n_pde must be >= 1");
  if (data_batch < 1) throw ConfigError("data_batch must be >= 1");
  if (hidden_widths.empty()) throw ConfigError("hidden_widths must not be empty");
  for (auto w : hidden_widths)
    if (w < 1) throw ConfigError("hidden widths must be >= 1");
  if (latent_dim < 1) throw ConfigError("latent_dim must be >= 1");
  if (!(input_scale_ratio > 0.0) || !std::isfinite(input_scale_ratio)) throw ConfigError("input_scale_ratio must be > 0");
}

TrainConfig train_config_from_json(const std::string& text) {
  const std::string what = "train config";
  const auto j = parse_config_json(text, what);
  require_object(j, what);
  reject_unknown_keys(j,
                      {"lambda", "variant", "steps", "learning_rate", "beta1", "beta2", "epsilon", "n_pde",
                       "resample_collocation", "data_batch", "full_batch_limit", "laplacian_mode", "laplacian_axes",
                       "pde_normalization", "hidden_widths", "latent_dim", "activation", "input_scale_ratio", "seed"},
                      what);
  TrainConfig c;
  read_optional(j, "lambda", c.lambda, what);
  read_optional(j, "steps", c.steps, what);
  read_optional(j, "learning_rate", c.learning_rate, what);
  read_optional(j, "beta1", c.beta1, what);
  read_optional(j, "beta2", c.beta2, what);
  read_optional(j, "epsilon", c.epsilon, what);
  read_optional(j, "n_pde", c.n_pde, what);
  read_optional(j, "resample_collocation", c.resample_collocation, what);
  read_optional(j, "data_batch", c.data_batch, what);
  read_optional(j, "full_batch_limit", c.full_batch_limit, what);
  read_optional(j, "hidden_widths", c.hidden_widths, what);
  read_optional(j, "latent_dim", c.latent_dim, what);
  read_optional(j, "input_scale_ratio", c.input_scale_ratio, what);
  read_optional(j, "seed", c.seed, what);
  std::string s;
  if (s.clear(), read_optional(j, "variant", s, what), !s.empty()) c.variant = variant_from_string(s);
  if (s.clear(), read_optional(j, "laplacian_mode", s, what), !s.empty()) c.laplacian_mode = laplacian_mode_from_string(s);
  if (s.clear(), read_optional(j, "laplacian_axes", s, what), !s.empty()) c.laplacian_axes = laplacian_axes_from_string(s);
  if (s.clear(), read_optional(j, "pde_normalization", s, what), !s.empty())
    c.pde_normalization = pde_normalization_from_string(s);
  if (s.clear(), read_optional(j, "activation", s, what), !s.empty()) c.activation = activation_from_string(s);
  c.validate();
  return c;
}

std::string train_config_to_json(const TrainConfig& c) {
  nlohmann::json j = {{"lambda", c.lambda},
                      {"variant", to_string(c.variant)},
                      {"steps", c.steps},
                      {"learning_rate", c.learning_rate},
                      {"beta1", c.beta1},
                      {"beta2", c.beta2},
                      {"epsilon", c.epsilon},
                      {"n_pde", c.n_pde},
                      {"resample_collocation", c.resample_collocation},
                      {"data_batch", c.data_batch},
                      {"full_batch_limit", c.full_batch_limit},
                      {"laplacian_mode", to_string(c.laplacian_mode)},
                      {"laplacian_axes", to_string(c.laplacian_axes)},
                      {"pde_normalization", to_string(c.pde_normalization)},
                      {"hidden_widths", c.hidden_widths},
                      {"latent_dim", c.latent_dim},
                      {"activation", to_string(c.activation)},
                      {"input_scale_ratio", c.input_scale_ratio},
                      {"seed", c.seed}};
  return j.dump(2) + "\n";
}

std::string LossReport::to_csv() const {
  std::string out = "step,l_data,l_pde,l_total\n";
  for (const auto& r : records)
    out += std::to_string(r.step) + "," + io::shortest(r.l_data) + "," + io::shortest(r.l_pde) + "," + io::shortest(r.l_total) + "\n";
  return out;
}

DivergenceError::DivergenceError(std::size_t step, std::string term, LossReport report)
    : Error("training diverged at step " + std::to_string(step) + ": " + term + " loss is not finite"),
      step_(step),
      term_(std::move(term)),
      report_(std::move(report)) {}

// ---------------------------------------------------------------------------
// Loss terms

namespace {

double part_of(const ComplexPressure& p, Part part) { return part == Part::real ? p.re : p.im; }

struct DataBatch {
  Matrix pairs;
  RowVector targets;
};

DataBatch data_batch_of(const std::vector<ATFSample>& samples, const ModelMeta& meta) {
  if (samples.empty()) throw DomainError("data loss needs at least one sample");
  DataBatch b;
  b.pairs.resize(6, static_cast<Eigen::Index>(samples.size()));
  b.targets.resize(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.frequency != meta.frequency)
      throw DomainError("sample at " + io::shortest(s.frequency) + " Hz does not match the model's " + io::shortest(meta.frequency) + " Hz");
    const Eigen::Index c = static_cast<Eigen::Index>(i);
    b.pairs.col(c) << s.receiver.x, s.receiver.y, s.receiver.z, s.source.x, s.source.y, s.source.z;
    b.targets(c) = part_of(s.pressure, meta.part) / meta.target_scale;
  }
  return b;
}

// Mean squared misfit; adds weight * gradient into `grad` when given.
double data_term(const diff::ScalarField& f, const Vector& params, const Matrix& pairs, const RowVector& targets,
                 diff::Tape& tape, Vector* grad, double weight) {
  const auto out = diff::forward(f, pairs, params, {}, tape);
  const RowVector r = out.value - targets;
  const double n = static_cast<double>(r.size());
  if (grad) diff::backward(f, params, tape, (2.0 * weight / n) * r, RowVector(), *grad);
  return r.squaredNorm() / n;
}

std::vector<std::size_t> laplacian_directions(const ModelField& mf, const DomainBox& domain, bool source_side,
                                              LaplacianAxes axes) {
  const auto& coords = source_side ? mf.source_coords : mf.receiver_coords;
  std::vector<std::size_t> dirs;
  const auto used = axes == LaplacianAxes::all ? std::vector<std::size_t>{0, 1, 2} : domain.spanned_axes();
  for (auto a : used) dirs.push_back(coords[a]);
  return dirs;
}

// Mean of (c * (lap + k^2 v))^2 over the columns of `pairs`.
double residual_term(const diff::ScalarField& f, const Vector& params, const Matrix& pairs,
                     const std::vector<std::size_t>& dirs, double k, double c, diff::Tape& tape, Vector* grad,
                     double weight) {
  const auto out = diff::forward(f, pairs, params, dirs, tape);
  const RowVector r = c * (out.laplacian + (k * k) * out.value);
  const double n = static_cast<double>(r.size());
  if (grad) {
    const RowVector seed = (2.0 * weight * c / n) * r;
    diff::backward(f, params, tape, (k * k) * seed, seed, *grad);
  }
  return r.squaredNorm() / n;
}

Matrix collocation_pairs(const CollocationSet& set) {
  if (set.size() == 0) throw DomainError("collocation set is empty");
  if (set.sources.size() != set.receivers.size()) throw DomainError("collocation receivers and sources differ in count");
  return pack_pairs(set.receivers, set.sources);
}

struct PdeEval {
  double loss = 0.0;
  std::uint64_t laplacians = 0;
};

PdeEval pde_term(const ModelField& mf, const Vector& params, const Matrix& pairs, const CollocationSet& set, double k,
                 LaplacianMode mode, LaplacianAxes axes, double c, diff::Tape& tape, Vector* grad, double weight) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber must be > 0");
  const auto n = static_cast<std::uint64_t>(pairs.cols());
  switch (mode) {
    case LaplacianMode::receiver:
      return {residual_term(mf.field, params, pairs, laplacian_directions(mf, set.omega_r, false, axes), k, c, tape, grad, weight), n};
    case LaplacianMode::source:
      return {residual_term(mf.field, params, pairs, laplacian_directions(mf, set.omega_s, true, axes), k, c, tape, grad, weight), n};
    case LaplacianMode::both_averaged: {
      const double a =
          residual_term(mf.field, params, pairs, laplacian_directions(mf, set.omega_r, false, axes), k, c, tape, grad, 0.5 * weight);
      const double b =
          residual_term(mf.field, params, pairs, laplacian_directions(mf, set.omega_s, true, axes), k, c, tape, grad, 0.5 * weight);
      return {0.5 * (a + b), 2 * n};
    }
  }
  return {};
}

double pde_scale(const TrainConfig& config, double k) {
  return config.pde_normalization == PdeNormalization::wavenumber ? 1.0 / (k * k) : 1.0;
}

}  // namespace

double data_loss(const Model& model, const std::vector<ATFSample>& samples) {
  const auto batch = data_batch_of(samples, meta_of(model));
  diff::Tape tape;
  return data_term(as_scalar_field(model).field, params_of(model).values, batch.pairs, batch.targets, tape, nullptr, 1.0);
}

double pde_loss(const diff::ScalarField& field, const Vector& params, const CollocationSet& collocation, double k,
                LaplacianMode mode, LaplacianAxes axes) {
  ModelField mf{field, {0, 1, 2}, {3, 4, 5}};
  diff::Tape tape;
  return pde_term(mf, params, collocation_pairs(collocation), collocation, k, mode, axes, 1.0, tape, nullptr, 1.0).loss;
}

double pde_loss(const Model& model, const CollocationSet& collocation, double k, LaplacianMode mode, LaplacianAxes axes) {
  diff::Tape tape;
  return pde_term(as_scalar_field(model), params_of(model).values, collocation_pairs(collocation), collocation, k, mode,
                  axes, 1.0, tape, nullptr, 1.0)
      .loss;
}

namespace {

LossTerms loss_and_gradient(const Model& model, const Matrix& data_pairs, const RowVector& targets, const Matrix& col_pairs,
                            const CollocationSet& col, double k, const TrainConfig& config, diff::Tape& tape, Vector* grad,
                            std::uint64_t* laplacians) {
  const auto& mf = as_scalar_field(model);
  const auto& params = params_of(model).values;
  LossTerms t;
  t.data = data_term(mf.field, params, data_pairs, targets, tape, grad, 1.0);
  if (uses_pde(config.variant)) {
    const auto pde = pde_term(mf, params, col_pairs, col, k, config.laplacian_mode, config.laplacian_axes,
                              pde_scale(config, k), tape, config.lambda > 0.0 ? grad : nullptr, config.lambda);
    t.pde = pde.loss;
    if (laplacians) *laplacians += pde.laplacians;
  }
  t.total = t.data + config.lambda * t.pde;
  return t;
}

}  // namespace

LossTerms total_loss(const Model& model, const std::vector<ATFSample>& samples, const CollocationSet& collocation, double k,
                     const TrainConfig& config) {
  const auto batch = data_batch_of(samples, meta_of(model));
  const Matrix col = uses_pde(config.variant) ? collocation_pairs(collocation) : Matrix();
  diff::Tape tape;
  return loss_and_gradient(model, batch.pairs, batch.targets, col, collocation, k, config, tape, nullptr, nullptr);
}

Vector total_loss_gradient(const Model& model, const std::vector<ATFSample>& samples, const CollocationSet& collocation,
                           double k, const TrainConfig& config) {
  const auto batch = data_batch_of(samples, meta_of(model));
  const Matrix col = uses_pde(config.variant) ? collocation_pairs(collocation) : Matrix();
  diff::Tape tape;
  Vector grad = Vector::Zero(static_cast<Eigen::Index>(params_of(model).size()));
  loss_and_gradient(model, batch.pairs, batch.targets, col, collocation, k, config, tape, &grad, nullptr);
  return grad;
}

// ---------------------------------------------------------------------------
// Training

Model make_model(const ATFDataset& dataset, double frequency, Part part, const TrainDomains& domains,
                 const TrainConfig& config, std::uint64_t seed) {
  config.validate();
  double scale = 0.0;
  for (const auto& s : dataset.samples)
    if (s.frequency == frequency) scale = std::max(scale, std::abs(s.pressure.value()));
  if (scale == 0.0) scale = 1.0;
  const Position3 ext = domains.receivers.extent();
  const double half = 0.5 * std::max({ext.x, ext.y, ext.z});
  const double l = config.input_scale_ratio * half;
  InputNorm norm{domains.receivers.center(), {l, l, l}};
  ModelMeta meta{frequency, part, scale};
  if (uses_deepset(config.variant)) {
    MLPSpec phi{3, config.hidden_widths, config.latent_dim, config.activation};
    MLPSpec rho{config.latent_dim, config.hidden_widths, 1, config.activation};
    return init_deepset(phi, rho, norm, meta, seed);
  }
  MLPSpec net{6, config.hidden_widths, 1, config.activation};
  return init_plain(net, norm, meta, seed);
}

TrainResult train(Model model, const ATFDataset& dataset, const TrainConfig& config, const TrainDomains& domains) {
  config.validate();
  if (uses_deepset(config.variant) != is_deepset(model))
    throw ConfigError("variant " + to_string(config.variant) + " does not match the model architecture");
  const ModelMeta meta = meta_of(model);
  const auto samples = dataset.at_frequency(meta.frequency);
  if (samples.empty()) throw CoverageError("dataset has no samples at " + io::shortest(meta.frequency) + " Hz");
  const double k = wavenumber_of(meta.frequency, dataset.speed_of_sound);
  const auto all = data_batch_of(samples, meta);
  const std::size_t n = samples.size();
  const bool full_batch = n <= config.full_batch_limit;
  const std::size_t batch = full_batch ? n : std::min(config.data_batch, n);

  std::mt19937_64 batch_rng(mix_seed(config.seed, 3));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = n;
  Matrix data_pairs = all.pairs;
  RowVector targets = all.targets;
  auto next_batch = [&] {
    if (full_batch) return;
    data_pairs.resize(6, static_cast<Eigen::Index>(batch));
    targets.resize(static_cast<Eigen::Index>(batch));
    for (std::size_t j = 0; j < batch; ++j) {
      if (cursor == n) {
        // Fisher-Yates with our own uniform draws keeps the order platform independent.
        for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[static_cast<std::size_t>(unit_uniform(batch_rng) * static_cast<double>(i + 1))]);
        cursor = 0;
      }
      const auto src = static_cast<Eigen::Index>(order[cursor++]);
      data_pairs.col(static_cast<Eigen::Index>(j)) = all.pairs.col(src);
      targets(static_cast<Eigen::Index>(j)) = all.targets(src);
    }
  };

  const bool pde = uses_pde(config.variant);
  std::mt19937_64 col_rng(mix_seed(config.seed, 2));
  CollocationSet col;
  Matrix col_pairs;
  auto next_collocation = [&](bool first) {
    if (!pde || (!first && !config.resample_collocation)) return;
    col = sample_collocation(domains, config.n_pde, col_rng());
    col_pairs = collocation_pairs(col);
  };

  TrainResult result{std::move(model), {}, 0};
  auto& params = params_of(result.model).values;
  const Eigen::Index np = params.size();
  Vector m = Vector::Zero(np), v = Vector::Zero(np), grad(np);
  diff::Tape tape;
  result.report.records.reserve(config.steps + 1);
  double b1t = 1.0, b2t = 1.0;

  auto check = [&](std::size_t step, const LossTerms& t) {
    result.report.records.push_back({step, t.data, t.pde, t.total});
    if (!std::isfinite(t.data)) throw DivergenceError(step, "data", result.report);
    if (!std::isfinite(t.pde)) throw DivergenceError(step, "pde", result.report);
    if (!std::isfinite(t.total)) throw DivergenceError(step, "total", result.report);
  };

  next_collocation(true);
  for (std::size_t step = 0; step < config.steps; ++step) {
    next_batch();
    if (step > 0) next_collocation(false);
    grad.setZero();
    const auto t = loss_and_gradient(result.model, data_pairs, targets, col_pairs, col, k, config, tape, &grad,
                                     &result.laplacian_evaluations);
    check(step, t);
    if (!grad.allFinite()) throw DivergenceError(step, "gradient", result.report);
    b1t *= config.beta1;
    b2t *= config.beta2;
    m = config.beta1 * m + (1.0 - config.beta1) * grad;
    v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseAbs2();
    const double lr = config.learning_rate / (1.0 - b1t);
    const double vc = 1.0 / (1.0 - b2t);
    params.array() -= lr * m.array() / ((v.array() * vc).sqrt() + config.epsilon);
  }
  // Final record: full data set and the current collocation set.
  const auto t = loss_and_gradient(result.model, all.pairs, all.targets, col_pairs, col, k, config, tape, nullptr,
                                   &result.laplacian_evaluations);
  check(config.steps, t);
  return result;
}

TrainResult train(Model model, const ATFDataset& dataset, const TrainConfig& config) {
  return train(std::move(model), dataset, config, TrainDomains::from_dataset(dataset));
}

std::uint64_t bin_seed(std::uint64_t seed, double frequency, Part part) {
  return mix_seed(mix_seed(seed, std::bit_cast<std::uint64_t>(frequency)), part == Part::real ? 0 : 1);
}

std::vector<BinResult> train_all_bins(const ATFDataset& dataset, const TrainDomains& domains, const TrainConfig& config,
                                      std::size_t jobs) {
  config.validate();
  const auto freqs = dataset.frequencies();
  if (freqs.empty()) throw CoverageError("dataset holds no frequency bins");
  std::vector<BinResult> results;
  for (double f : freqs)
    for (Part p : {Part::real, Part::imag}) results.push_back(BinResult{f, p, std::nullopt, {}, std::nullopt, 0.0});

  auto run = [&](BinResult& bin) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const std::uint64_t seed = bin_seed(config.seed, bin.frequency, bin.part);
      TrainConfig cfg = config;
      cfg.seed = seed;
      auto model = make_model(dataset, bin.frequency, bin.part, domains, cfg, mix_seed(seed, 1));
      bin.result = train(std::move(model), dataset, cfg, domains);
    } catch (const DivergenceError& e) {
      bin.error = e.what();
      bin.divergence = e;
    } catch (const std::exception& e) {
      bin.error = e.what();
    }
    bin.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, results.size()));
  if (workers == 1) {
    for (auto& bin : results) run(bin);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < results.size(); i = next++) run(results[i]);
    });
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace pipinn
