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

#include "pipinn/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "pipinn/dataset_io.hpp"
#include "pipinn/field_oracle.hpp"
#include "pipinn/io_util.hpp"
#include "pipinn/rng.hpp"

namespace pipinn {

std::string format_nmse(double db) {
  if (db == kExactNmse) return "< -300";
  return io::shortest(db);
}

double parse_nmse(const std::string& text) {
  if (text == "< -300") return kExactNmse;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw SchemaError("malformed NMSE value '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw SchemaError("malformed NMSE value '" + text + "'");
  }
}

double nmse(const std::vector<ComplexPressure>& predictions, const std::vector<ComplexPressure>& truths) {
  if (predictions.size() != truths.size()) throw DomainError("prediction and truth counts differ");
  if (truths.empty()) throw DomainError("NMSE needs at least one pair");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    num += std::norm(truths[i].value() - predictions[i].value());
    den += std::norm(truths[i].value());
  }
  if (!(den > 0.0)) throw DomainError("NMSE is undefined when every truth value is zero");
  if (num == 0.0) return kExactNmse;
  return 10.0 * std::log10(num / den);
}

// ---------------------------------------------------------------------------
// Predictors

namespace {

int part_key(Part p) { return p == Part::real ? 0 : 1; }

}  // namespace

PinnModelSet::PinnModelSet(std::vector<Model> models) {
  for (auto& m : models) add(std::move(m));
}

void PinnModelSet::add(Model model) {
  const auto& meta = meta_of(model);
  const auto key = std::make_pair(meta.frequency, part_key(meta.part));
  if (models_.count(key))
    throw ConfigError("two models for " + io::shortest(meta.frequency) + " Hz (" + to_string(meta.part) + ")");
  models_.emplace(key, std::move(model));
}

std::vector<double> PinnModelSet::frequencies() const {
  std::vector<double> out;
  for (const auto& [key, m] : models_)
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  return out;
}

bool PinnModelSet::covers(double frequency) const {
  return models_.count({frequency, 0}) && models_.count({frequency, 1});
}

const Model& PinnModelSet::get(double frequency, Part part) const {
  const auto it = models_.find({frequency, part_key(part)});
  if (it == models_.end())
    throw CoverageError("no " + to_string(part) + "-part model for " + io::shortest(frequency) + " Hz");
  return it->second;
}

Predictor pinn_predictor(const PinnModelSet& models) {
  return [&models](double f, const std::vector<Position3>& r, const std::vector<Position3>& s) {
    const Model& re = models.get(f, Part::real);
    const Model& im = models.get(f, Part::imag);
    const auto pairs = pack_pairs(r, s);
    const auto a = forward_batch(re, pairs);
    const auto b = forward_batch(im, pairs);
    const double sr = meta_of(re).target_scale, si = meta_of(im).target_scale;
    std::vector<ComplexPressure> out;
    out.reserve(r.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.emplace_back(sr * a(i), si * b(i));
    return out;
  };
}

Predictor krr_predictor(const KrrModelSet& models) {
  return [&models](double f, const std::vector<Position3>& r, const std::vector<Position3>& s) {
    const auto it = models.find(f);
    if (it == models.end()) throw CoverageError("no KRR model for " + io::shortest(f) + " Hz");
    std::vector<ComplexPressure> out;
    out.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out.push_back(predict(it->second, r[i], s[i]));
    return out;
  };
}

Predictor oracle_predictor(const ScenarioConfig& scenario) {
  return [scenario](double f, const std::vector<Position3>& r, const std::vector<Position3>& s) {
    const double k = wavenumber_of(f, scenario.speed_of_sound);
    std::vector<ComplexPressure> out;
    out.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out.push_back(oracle_pressure(scenario, r[i], s[i], k));
    return out;
  };
}

Predictor zero_predictor() {
  return [](double, const std::vector<Position3>& r, const std::vector<Position3>&) {
    return std::vector<ComplexPressure>(r.size());
  };
}

// ---------------------------------------------------------------------------
// Tables

std::string NMSETable::to_csv() const {
  std::string out = "f_hz,method,variant,nmse_db,n_pairs\n";
  for (const auto& r : rows)
    out += io::shortest(r.frequency) + "," + r.method + "," + r.variant + "," + format_nmse(r.nmse_db) + "," +
           std::to_string(r.n_pairs) + "\n";
  return out;
}

NMSETable NMSETable::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "f_hz,method,variant,nmse_db,n_pairs") throw SchemaError("not an NMSE table");
  NMSETable t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw SchemaError("NMSE table line " + std::to_string(lineno) + ": expected 5 fields");
    NMSERow r;
    try {
      r.frequency = std::stod(f[0]);
      r.n_pairs = static_cast<std::size_t>(std::stoull(f[4]));
    } catch (const std::logic_error&) {
      throw SchemaError("NMSE table line " + std::to_string(lineno) + ": malformed number");
    }
    r.method = f[1];
    r.variant = f[2];
    r.nmse_db = parse_nmse(f[3]);
    t.rows.push_back(r);
  }
  return t;
}

std::string dataset_checksum(const ATFDataset& dataset) { return io::checksum(serialize_dataset(dataset)); }

NMSETable evaluate_method(const Predictor& predictor, const ATFDataset& test, const std::string& method,
                          const std::string& variant) {
  NMSETable table;
  table.dataset_checksum = dataset_checksum(test);
  for (double f : test.frequencies()) {
    const auto samples = test.at_frequency(f);
    std::vector<Position3> r, s;
    std::vector<ComplexPressure> truth;
    for (const auto& smp : samples) {
      r.push_back(smp.receiver);
      s.push_back(smp.source);
      truth.push_back(smp.pressure);
    }
    const auto pred = predictor(f, r, s);
    if (pred.size() != truth.size()) throw DomainError("predictor returned the wrong number of values");
    table.rows.push_back({f, method, variant, nmse(pred, truth), samples.size()});
  }
  return table;
}

bool swap_invariance_probe(const Model& model, std::uint64_t seed, std::size_t pairs) {
  std::mt19937_64 rng(seed);
  auto draw = [&] { return -2.0 + 4.0 * unit_uniform(rng); };
  for (std::size_t i = 0; i < pairs; ++i) {
    const Position3 r{draw(), draw(), draw()};
    const Position3 s{draw(), draw(), draw()};
    if (forward(model, r, s) != forward(model, s, r)) return false;
  }
  return true;
}

AblationResult run_ablation(const ScenarioConfig& scenario, const TrainConfig& base, std::size_t jobs) {
  scenario.validate();
  const auto train_set = synth_dataset(scenario, Split::train);
  const auto test_set = synth_dataset(scenario, Split::test);
  const auto domains = TrainDomains::from_scenario(scenario);
  AblationResult out;
  out.table.dataset_checksum = dataset_checksum(test_set);
  std::vector<NMSETable> per_variant;
  for (Variant v : {Variant::full, Variant::no_pde, Variant::plain_pinn, Variant::plain}) {
    TrainConfig cfg = base;
    cfg.variant = v;
    AblationVariant av;
    av.variant = v;
    av.bins = train_all_bins(train_set, domains, cfg, jobs);
    std::vector<Model> models;
    std::string failures;
    for (const auto& b : av.bins) {
      if (b.divergence) throw *b.divergence;
      if (b.result)
        models.push_back(b.result->model);
      else
        failures += (failures.empty() ? "" : "; ") + io::shortest(b.frequency) + " Hz " + to_string(b.part) + ": " + b.error;
    }
    if (!failures.empty()) throw Error("ablation variant " + to_string(v) + " failed: " + failures);
    av.swap_invariant = true;
    for (const auto& m : models) av.swap_invariant = av.swap_invariant && swap_invariance_probe(m, base.seed);
    const PinnModelSet set(models);
    per_variant.push_back(evaluate_method(pinn_predictor(set), test_set, "pinn", to_string(v)));
    out.variants.push_back(std::move(av));
  }
  // Rows grouped by frequency, variants in the fixed order above.
  for (std::size_t i = 0; i < per_variant.front().rows.size(); ++i)
    for (const auto& t : per_variant) out.table.rows.push_back(t.rows[i]);
  return out;
}

NMSETable compare_methods(const ATFDataset& test, const PinnModelSet& pinn, const KrrModelSet& krr) {
  std::string missing;
  for (double f : test.frequencies()) {
    if (!pinn.covers(f)) missing += " pinn@" + io::shortest(f);
    if (!krr.count(f)) missing += " krr@" + io::shortest(f);
  }
  if (!missing.empty()) throw CoverageError("method coverage does not match the test frequencies:" + missing);
  const auto a = evaluate_method(pinn_predictor(pinn), test, "pinn", "full");
  const auto b = evaluate_method(krr_predictor(krr), test, "krr", "-");
  NMSETable t;
  t.dataset_checksum = a.dataset_checksum;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    t.rows.push_back(a.rows[i]);
    t.rows.push_back(b.rows[i]);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Heatmaps

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) v.back() = hi;
  return v;
}

}  // namespace

std::vector<double> GridSpec::xs() const { return linspace(x_min, x_max, nx); }
std::vector<double> GridSpec::ys() const { return linspace(y_min, y_max, ny); }

std::string Heatmap::to_csv() const {
  std::string out = "y\\x";
  for (double x : xs) out += "," + io::shortest(x);
  out += "\n";
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    out += io::shortest(ys[iy]);
    for (double v : values[iy]) out += "," + io::shortest(v);
    out += "\n";
  }
  return out;
}

Heatmap export_heatmap(const Predictor& predictor, const Position3& source, double frequency, const GridSpec& grid, Part part,
                       const DomainBox& receiver_domain) {
  if (grid.nx < 1 || grid.ny < 1) throw DomainError("heatmap grid needs at least one point per axis");
  if (!(grid.x_min <= grid.x_max) || !(grid.y_min <= grid.y_max)) throw DomainError("heatmap grid bounds are inverted");
  const double tol = 1e-9;
  for (const Position3& corner : {Position3{grid.x_min, grid.y_min, grid.z}, Position3{grid.x_max, grid.y_max, grid.z}})
    if (!receiver_domain.contains(corner, tol)) throw DomainError("heatmap grid extends outside the receiver domain");
  Heatmap h;
  h.xs = grid.xs();
  h.ys = grid.ys();
  std::vector<Position3> r, s;
  for (double y : h.ys)
    for (double x : h.xs) {
      r.push_back({x, y, grid.z});
      s.push_back(source);
    }
  const auto p = predictor(frequency, r, s);
  h.values.assign(h.ys.size(), std::vector<double>(h.xs.size()));
  for (std::size_t iy = 0; iy < h.ys.size(); ++iy)
    for (std::size_t ix = 0; ix < h.xs.size(); ++ix) {
      const auto& v = p[iy * h.xs.size() + ix];
      h.values[iy][ix] = part == Part::real ? v.re : v.im;
    }
  return h;
}

}  // namespace pipinn
