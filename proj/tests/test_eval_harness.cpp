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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pipinn/eval_harness.hpp"
#include "pipinn/field_oracle.hpp"

using namespace pipinn;

TEST_CASE("nmse anchor cases") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ComplexPressure> p(40), zero(40), half(40);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = {g(rng), g(rng)};
    half[i] = ComplexPressure(0.5 * p[i].value());
  }
  CHECK(nmse(p, p) == kExactNmse);
  CHECK(format_nmse(nmse(p, p)) == "< -300");
  CHECK(std::abs(nmse(zero, p)) <= 1e-12);
  CHECK(std::abs(nmse(half, p) - (-6.0205999132796239)) <= 1e-9);
  CHECK_THROWS_AS(nmse(p, zero), DomainError);
  CHECK_THROWS_AS(nmse({}, {}), DomainError);
  CHECK_THROWS_AS(nmse(half, {p[0]}), DomainError);
}

TEST_CASE("nmse invariances") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ComplexPressure> p(30), q(30);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = {g(rng), g(rng)};
    q[i] = {p[i].re + 0.3 * g(rng), p[i].im + 0.3 * g(rng)};
  }
  const double base = nmse(q, p);
  const std::complex<double> c(-2.5, 1.75);
  auto ps = p, qs = q;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ps[i] = ComplexPressure(c * p[i].value());
    qs[i] = ComplexPressure(c * q[i].value());
  }
  CHECK(nmse(qs, ps) == doctest::Approx(base).epsilon(1e-12));
  auto pr = p, qr = q;
  std::reverse(pr.begin(), pr.end());
  std::reverse(qr.begin(), qr.end());
  CHECK(nmse(qr, pr) == doctest::Approx(base).epsilon(1e-12));
  CHECK(parse_nmse(format_nmse(base)) == base);
  CHECK(parse_nmse("< -300") == kExactNmse);
  CHECK_THROWS_AS(parse_nmse("abc"), SchemaError);
}

TEST_CASE("evaluate_method with oracle and zero predictors") {
  const auto sc = ScenarioConfig::measurement_mirror({500.0, 1000.0, 1500.0});
  const auto test = synth_dataset(sc, Split::test);
  const auto oracle = evaluate_method(oracle_predictor(sc), test, "oracle");
  REQUIRE(oracle.rows.size() == 3);
  for (const auto& r : oracle.rows) {
    CHECK(r.nmse_db == kExactNmse);
    CHECK(r.n_pairs == 1920);
  }
  for (const auto& r : evaluate_method(zero_predictor(), test, "zero").rows) CHECK(std::abs(r.nmse_db) <= 1e-12);
  CHECK(oracle.rows[0].frequency == 500.0);
  CHECK(oracle.dataset_checksum == dataset_checksum(test));

  // Per-frequency rows equal nmse over the concatenated pairs of that frequency.
  auto noisy = [&](double f, const std::vector<Position3>& r, const std::vector<Position3>& s) {
    auto v = oracle_predictor(sc)(f, r, s);
    for (std::size_t i = 0; i < v.size(); ++i) v[i].re += 1e-4 * std::sin(static_cast<double>(i));
    return v;
  };
  const auto t = evaluate_method(noisy, test, "noisy");
  const auto at = test.at_frequency(1000.0);
  std::vector<Position3> r, s;
  std::vector<ComplexPressure> truth;
  for (const auto& smp : at) {
    r.push_back(smp.receiver);
    s.push_back(smp.source);
    truth.push_back(smp.pressure);
  }
  CHECK(t.rows[1].nmse_db == nmse(noisy(1000.0, r, s), truth));

  const auto csv = t.to_csv();
  const auto back = NMSETable::from_csv(csv);
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[2].nmse_db == t.rows[2].nmse_db);
  CHECK(back.to_csv() == csv);
  CHECK(NMSETable::from_csv(oracle.to_csv()).rows[0].nmse_db == kExactNmse);
}

TEST_CASE("compare_methods shape and coverage") {
  const auto sc = ScenarioConfig::measurement_mirror({500.0, 700.0});
  const auto train = synth_dataset(sc, Split::train);
  const auto test = synth_dataset(sc, Split::test);
  TrainConfig cfg;
  cfg.hidden_widths = {8};
  cfg.latent_dim = 4;
  cfg.steps = 3;
  cfg.n_pde = 8;
  const auto bins = train_all_bins(train, TrainDomains::from_scenario(sc), cfg);
  std::vector<Model> models;
  for (const auto& b : bins) models.push_back(b.result->model);
  PinnModelSet pinn(models);
  KrrModelSet krr;
  for (double f : sc.frequencies) krr.emplace(f, fit(train.at_frequency(f), {wavenumber_of(f, 343.0), true, 1e-6}));
  const auto t = compare_methods(test, pinn, krr);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].method == "pinn");
  CHECK(t.rows[1].method == "krr");
  CHECK(t.rows[1].frequency == 500.0);
  CHECK(t.rows[2].frequency == 700.0);
  CHECK(t.dataset_checksum == dataset_checksum(test));
  CHECK(t.rows[1].nmse_db < -10.0);

  KrrModelSet partial{{500.0, krr.at(500.0)}};
  CHECK_THROWS_AS(compare_methods(test, pinn, partial), CoverageError);
  CHECK_THROWS_AS(pinn.add(models[0]), ConfigError);
  PinnModelSet empty;
  CHECK_THROWS_AS(evaluate_method(pinn_predictor(empty), test, "x"), CoverageError);
}

TEST_CASE("swap invariance probe separates the architectures") {
  const auto sc = ScenarioConfig::measurement_mirror({500.0});
  const auto train = synth_dataset(sc, Split::train);
  const auto domains = TrainDomains::from_scenario(sc);
  TrainConfig cfg;
  cfg.hidden_widths = {8, 8};
  cfg.latent_dim = 8;
  for (Variant v : {Variant::full, Variant::no_pde, Variant::plain_pinn, Variant::plain}) {
    cfg.variant = v;
    const auto m = make_model(train, 500.0, Part::real, domains, cfg, 5);
    CHECK(swap_invariance_probe(m, 1) == uses_deepset(v));
  }
}

TEST_CASE("export_heatmap") {
  const double f = 1500.0;
  auto sc = ScenarioConfig::measurement_mirror({f});
  const GridSpec grid;
  const Position3 src = sc.sources()[0];  // (1.5, 0, 0)
  const auto h = export_heatmap(oracle_predictor(sc), src, f, grid, Part::real, sc.receiver_domain());
  REQUIRE(h.xs.size() == 57);
  REQUIRE(h.ys.size() == 57);
  REQUIRE(h.values.size() == 57);
  CHECK(h.xs[1] - h.xs[0] == doctest::Approx(0.005));

  // Zero crossings along the row y = 0, which points straight at the source.
  const auto& row = h.values[28];
  CHECK(h.ys[28] == doctest::Approx(0.0).epsilon(1e-12));
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < row.size(); ++i)
    if ((row[i] < 0) != (row[i + 1] < 0))
      crossings.push_back(h.xs[i] + (h.xs[i + 1] - h.xs[i]) * row[i] / (row[i] - row[i + 1]));
  REQUIRE(crossings.size() >= 2);
  const double period = 2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  CHECK(period == doctest::Approx(343.0 / f).epsilon(0.01));

  const auto z = export_heatmap(zero_predictor(), src, f, grid, Part::imag, sc.receiver_domain());
  for (const auto& r : z.values)
    for (double v : r) CHECK(v == 0.0);

  GridSpec small{-0.1, 0.1, -0.05, 0.05, 0.0, 5, 3};
  const auto s = export_heatmap(zero_predictor(), src, f, small, Part::real, sc.receiver_domain());
  CHECK(s.values.size() == 3);
  CHECK(s.values[0].size() == 5);
  const auto csv = s.to_csv();
  CHECK(csv.rfind("y\\x,", 0) == 0);
  std::istringstream header(csv.substr(4, csv.find('\n') - 4));
  std::vector<double> xs;
  for (std::string cell; std::getline(header, cell, ',');) xs.push_back(std::stod(cell));
  REQUIRE(xs.size() == 5);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(xs[i] == doctest::Approx(-0.1 + 0.05 * static_cast<double>(i)));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  GridSpec outside = grid;
  outside.x_max = 0.5;
  CHECK_THROWS_AS(export_heatmap(zero_predictor(), src, f, outside, Part::real, sc.receiver_domain()), DomainError);
}
