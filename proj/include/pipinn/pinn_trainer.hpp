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

// Physics-informed training of per-bin models: data misfit, Helmholtz residual
// at collocation points, Adam updates, and the four ablation variants.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pipinn/core_types.hpp"
#include "pipinn/diff_engine.hpp"
#include "pipinn/model.hpp"

namespace pipinn {

enum class Variant { full, no_pde, plain_pinn, plain };
enum class LaplacianMode { receiver, source, both_averaged };
// Which axes of a domain enter the Laplacian: those it spans, or always x, y, z.
enum class LaplacianAxes { spanned, all };
// physical: residual lap P + k^2 P as is. wavenumber: residual divided by k^2
// inside the training objective so the PDE term does not scale like k^4.
enum class PdeNormalization { physical, wavenumber };

std::string to_string(Variant v);
std::string to_string(LaplacianMode m);
std::string to_string(LaplacianAxes a);
std::string to_string(PdeNormalization n);
Variant variant_from_string(const std::string& text);
LaplacianMode laplacian_mode_from_string(const std::string& text);
LaplacianAxes laplacian_axes_from_string(const std::string& text);
PdeNormalization pde_normalization_from_string(const std::string& text);

bool uses_pde(Variant v);
bool uses_deepset(Variant v);

// Where collocation points are drawn. Sources come from the box unless a
// source circle is given, in which case they are uniform in angle on it.
struct TrainDomains {
  DomainBox receivers;
  DomainBox sources;
  std::optional<SourceCircle> source_circle;

  static TrainDomains from_scenario(const ScenarioConfig& scenario);
  static TrainDomains from_dataset(const ATFDataset& dataset);
};

struct CollocationSet {
  std::vector<Position3> receivers;
  std::vector<Position3> sources;
  std::uint64_t seed = 0;
  DomainBox omega_r;
  DomainBox omega_s;

  std::size_t size() const { return receivers.size(); }
  // The set with every (r, s) replaced by (s, r) and the domains exchanged.
  CollocationSet mirrored() const;
};

CollocationSet sample_collocation(const DomainBox& omega_r, const DomainBox& omega_s, std::size_t n, std::uint64_t seed);
CollocationSet sample_collocation(const TrainDomains& domains, std::size_t n, std::uint64_t seed);

struct TrainConfig {
  double lambda = 1.0;
  Variant variant = Variant::full;
  std::size_t steps = 4000;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t n_pde = 256;
  bool resample_collocation = true;
  // Data samples per step once the bin holds more than full_batch_limit samples.
  std::size_t data_batch = 256;
  std::size_t full_batch_limit = 1024;
  LaplacianMode laplacian_mode = LaplacianMode::receiver;
  LaplacianAxes laplacian_axes = LaplacianAxes::spanned;
  PdeNormalization pde_normalization = PdeNormalization::wavenumber;
  std::vector<std::size_t> hidden_widths{128, 128};
  std::size_t latent_dim = 128;
  Activation activation = Activation::tanh;
  // Input scale as a fraction of the receiver domain's largest half-extent.
  double input_scale_ratio = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

TrainConfig train_config_from_json(const std::string& text);
std::string train_config_to_json(const TrainConfig& config);

struct LossRecord {
  std::size_t step = 0;
  double l_data = 0.0;
  double l_pde = 0.0;
  double l_total = 0.0;
};

struct LossReport {
  std::vector<LossRecord> records;
  std::string to_csv() const;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, std::string term, LossReport report);
  std::size_t step() const { return step_; }
  const std::string& term() const { return term_; }
  const LossReport& report() const { return report_; }

 private:
  std::size_t step_;
  std::string term_;
  LossReport report_;
};

// Network output in target units, one sample per element of `samples`.
double data_loss(const Model& model, const std::vector<ATFSample>& samples);

// Mean of |lap P + k^2 P|^2 over the collocation set, derivatives in meters.
double pde_loss(const Model& model, const CollocationSet& collocation, double k, LaplacianMode mode,
                LaplacianAxes axes = LaplacianAxes::spanned);
// Same for an arbitrary field over (r, s); lets tests inject closed-form fields.
double pde_loss(const diff::ScalarField& field, const diff::Vector& params, const CollocationSet& collocation, double k,
                LaplacianMode mode, LaplacianAxes axes = LaplacianAxes::spanned);

struct LossTerms {
  double total = 0.0;
  double data = 0.0;
  double pde = 0.0;
};

// L_total = L_data + lambda * L_PDE. L_PDE here is the training-objective form
// (divided by k^4 under wavenumber normalization) and is 0 for no_pde/plain.
LossTerms total_loss(const Model& model, const std::vector<ATFSample>& samples, const CollocationSet& collocation,
                     double k, const TrainConfig& config);
// Gradient of total_loss with respect to the model parameters.
diff::Vector total_loss_gradient(const Model& model, const std::vector<ATFSample>& samples,
                                 const CollocationSet& collocation, double k, const TrainConfig& config);

struct TrainResult {
  Model model;
  LossReport report;
  // Points at which a Laplacian was evaluated (each direction set counts once).
  std::uint64_t laplacian_evaluations = 0;
};

// Model of the variant's kind with normalization and target scale set for the bin.
Model make_model(const ATFDataset& dataset, double frequency, Part part, const TrainDomains& domains,
                 const TrainConfig& config, std::uint64_t seed);

TrainResult train(Model model, const ATFDataset& dataset, const TrainConfig& config, const TrainDomains& domains);
TrainResult train(Model model, const ATFDataset& dataset, const TrainConfig& config);

struct BinResult {
  double frequency = 0.0;
  Part part = Part::real;
  std::optional<TrainResult> result;
  std::string error;
  std::optional<DivergenceError> divergence;
  double seconds = 0.0;
};

// Seed of one (frequency, part) run, independent of scheduling.
std::uint64_t bin_seed(std::uint64_t seed, double frequency, Part part);

// Trains 2F models, at most `jobs` at a time. Results are ordered by frequency
// then part. A failing bin is recorded and does not stop the others.
std::vector<BinResult> train_all_bins(const ATFDataset& dataset, const TrainDomains& domains, const TrainConfig& config,
                                      std::size_t jobs = 1);

}  // namespace pipinn
