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

// NMSE scoring, ablation and method comparison tables, and heatmap export.

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pipinn/core_types.hpp"
#include "pipinn/krr_baseline.hpp"
#include "pipinn/model.hpp"
#include "pipinn/pinn_trainer.hpp"

namespace pipinn {

// Exact reconstruction has no finite NMSE; it is carried as -infinity and printed as "< -300".
inline constexpr double kExactNmse = -std::numeric_limits<double>::infinity();
std::string format_nmse(double db);
double parse_nmse(const std::string& text);

// 10 log10(sum |P - Q|^2 / sum |P|^2) with Q the predictions and P the truths.
double nmse(const std::vector<ComplexPressure>& predictions, const std::vector<ComplexPressure>& truths);

// Pressures at one frequency for paired receiver/source lists.
using Predictor = std::function<std::vector<ComplexPressure>(double frequency, const std::vector<Position3>& receivers,
                                                             const std::vector<Position3>& sources)>;

// Real/imaginary model pairs keyed by frequency.
class PinnModelSet {
 public:
  PinnModelSet() = default;
  explicit PinnModelSet(std::vector<Model> models);
  void add(Model model);
  std::vector<double> frequencies() const;
  bool covers(double frequency) const;
  const Model& get(double frequency, Part part) const;

 private:
  std::map<std::pair<double, int>, Model> models_;
};

using KrrModelSet = std::map<double, KRRModel>;

// The model sets are referenced, not copied, and must outlive the predictor.
Predictor pinn_predictor(const PinnModelSet& models);
Predictor krr_predictor(const KrrModelSet& models);
Predictor oracle_predictor(const ScenarioConfig& scenario);
Predictor zero_predictor();

struct NMSERow {
  double frequency = 0.0;
  std::string method;
  std::string variant;
  double nmse_db = 0.0;
  std::size_t n_pairs = 0;
};

struct NMSETable {
  std::vector<NMSERow> rows;
  std::string dataset_checksum;
  std::string config_hash;

  std::string to_csv() const;
  static NMSETable from_csv(const std::string& text);
};

// Checksum of the serialized dataset; identifies the exact test set scored.
std::string dataset_checksum(const ATFDataset& dataset);

// One row per frequency of `test`, in ascending frequency order.
NMSETable evaluate_method(const Predictor& predictor, const ATFDataset& test, const std::string& method,
                          const std::string& variant = "-");

// Bitwise r<->s probe over seeded random pairs in [-2, 2]^3.
bool swap_invariance_probe(const Model& model, std::uint64_t seed, std::size_t pairs = 100);

struct AblationVariant {
  Variant variant = Variant::full;
  std::vector<BinResult> bins;
  bool swap_invariant = false;
};

struct AblationResult {
  NMSETable table;
  std::vector<AblationVariant> variants;
};

// Trains every variant on the scenario's train split with shared seeds and scores each on the test split.
AblationResult run_ablation(const ScenarioConfig& scenario, const TrainConfig& base, std::size_t jobs = 1);

// Interleaved rows (pinn, krr) per frequency over the identical test set.
NMSETable compare_methods(const ATFDataset& test, const PinnModelSet& pinn, const KrrModelSet& krr);

struct GridSpec {
  double x_min = -0.14;
  double x_max = 0.14;
  double y_min = -0.14;
  double y_max = 0.14;
  double z = 0.0;
  std::size_t nx = 57;
  std::size_t ny = 57;

  std::vector<double> xs() const;
  std::vector<double> ys() const;
};

struct Heatmap {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::vector<double>> values;  // values[iy][ix]

  // Header row of x coordinates, then one row per y: y, values...
  std::string to_csv() const;
};

// Selected part of the predicted field over the grid for a fixed source.
// Throws DomainError when the grid leaves `receiver_domain`.
Heatmap export_heatmap(const Predictor& predictor, const Position3& source, double frequency, const GridSpec& grid, Part part,
                       const DomainBox& receiver_domain);

}  // namespace pipinn
