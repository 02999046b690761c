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
#include <filesystem>
#include <random>

#include "doctest.h"
#include "pipinn/io_util.hpp"
#include "pipinn/model.hpp"
#include "test_support.hpp"

using namespace pipinn;
using pipinn::testing::fd_laplacian;
using pipinn::testing::relative_error;

namespace {

MLPSpec spec(std::size_t in, std::vector<std::size_t> hidden, std::size_t out) {
  MLPSpec s;
  s.input_dim = in;
  s.hidden_widths = std::move(hidden);
  s.output_dim = out;
  return s;
}

DeepSetModel small_deepset(std::uint64_t seed, InputNorm norm = {}) {
  return init_deepset(spec(3, {8, 8}, 6), spec(6, {8, 8}, 1), norm, {700.0, Part::real, 1.0}, seed);
}

Position3 random_position(std::mt19937_64& rng, double half = 1.5) {
  std::uniform_real_distribution<double> u(-half, half);
  return {u(rng), u(rng), u(rng)};
}

std::vector<double> apply_layers(const diff::ParamVector& p, const std::string& prefix, const MLPSpec& s, std::vector<double> x) {
  std::vector<std::size_t> widths = s.hidden_widths;
  widths.push_back(s.output_dim);
  for (std::size_t l = 0; l < widths.size(); ++l) {
    const auto W = p.block(prefix + ".W" + std::to_string(l));
    const auto b = p.block(prefix + ".b" + std::to_string(l));
    std::vector<double> y(widths[l]);
    for (std::size_t r = 0; r < widths[l]; ++r) {
      double acc = b(static_cast<Eigen::Index>(r), 0);
      for (std::size_t c = 0; c < x.size(); ++c) acc += W(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
      y[r] = l + 1 < widths.size() ? std::tanh(acc) : acc;
    }
    x = std::move(y);
  }
  return x;
}

// Straight-line deep-set evaluation from the named parameter blocks.
double reference_deepset(const DeepSetModel& m, const Position3& r, const Position3& s) {
  const auto rn = m.norm().apply(r);
  const auto sn = m.norm().apply(s);
  auto hr = apply_layers(m.params(), "phi", m.phi_spec(), {rn.x, rn.y, rn.z});
  const auto hs = apply_layers(m.params(), "phi", m.phi_spec(), {sn.x, sn.y, sn.z});
  for (std::size_t i = 0; i < hr.size(); ++i) hr[i] += hs[i];
  return apply_layers(m.params(), "rho", m.rho_spec(), hr)[0];
}

double reference_plain(const PlainModel& m, const Position3& r, const Position3& s) {
  const auto rn = m.norm().apply(r);
  const auto sn = m.norm().apply(s);
  return apply_layers(m.params(), "net", m.net_spec(), {rn.x, rn.y, rn.z, sn.x, sn.y, sn.z})[0];
}

}  // namespace

TEST_CASE("init_deepset") {
  auto a = small_deepset(5);
  auto b = small_deepset(5);
  auto c = small_deepset(6);
  CHECK(a.params().values == b.params().values);
  CHECK(a.params().values != c.params().values);
  CHECK(a.params().layout.is_bijective());
  for (const auto& block : a.params().layout.blocks()) {
    const auto values = a.params().block(block.name);
    if (block.name.find(".b") != std::string::npos) {
      CHECK(values.isZero(0.0));
    } else {
      CHECK(values.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / static_cast<double>(block.rows + block.cols)));
    }
  }
  CHECK_THROWS_AS(init_deepset(spec(3, {4}, 5), spec(6, {4}, 1), {}, {}, 1), DomainError);
  CHECK_THROWS_AS(init_deepset(spec(2, {4}, 5), spec(5, {4}, 1), {}, {}, 1), DomainError);

  // Default widths: two hidden layers of 128 with a 128-wide latent space.
  auto full = init_deepset(spec(3, {128, 128}, 128), spec(128, {128, 128}, 1), {}, {}, 1);
  CHECK(full.latent_dim() == 128);
  CHECK(full.params().size() == (3 * 128 + 128 + 2 * (128 * 128 + 128)) + (2 * (128 * 128 + 128) + 128 + 1));
}

TEST_CASE("deep-set forward") {
  std::mt19937_64 rng(3);
  SUBCASE("swap invariance is bitwise") {
    for (int trial = 0; trial < 50; ++trial) {
      auto m = small_deepset(static_cast<std::uint64_t>(trial), InputNorm{{0.1, -0.2, 0.0}, {0.7, 0.7, 0.7}});
      for (int k = 0; k < 10; ++k) {
        const auto r = random_position(rng), s = random_position(rng);
        CHECK(forward(m, r, s) == forward(m, s, r));
      }
    }
  }
  SUBCASE("zero rho gives zero") {
    auto m = small_deepset(9);
    for (const auto& block : m.params().layout.blocks())
      if (block.name.rfind("rho", 0) == 0) m.params().block(block.name).setZero();
    for (int k = 0; k < 10; ++k) CHECK(forward(m, random_position(rng), random_position(rng)) == 0.0);
  }
  SUBCASE("matches straight-line recomputation") {
    auto m = small_deepset(21, InputNorm{{0.0, 0.0, 0.0}, {1.5, 1.5, 1.5}});
    for (int k = 0; k < 20; ++k) {
      const auto r = random_position(rng), s = random_position(rng);
      CHECK(relative_error(forward(m, r, s), reference_deepset(m, r, s)) <= 1e-12);
    }
  }
  SUBCASE("shifting inputs and centre together leaves output unchanged") {
    const Position3 offset{3.0, -1.0, 0.5};
    auto m = small_deepset(4, InputNorm{{0.0, 0.0, 0.0}, {0.8, 0.8, 0.8}});
    auto shifted = small_deepset(4, InputNorm{offset, {0.8, 0.8, 0.8}});
    for (int k = 0; k < 20; ++k) {
      const auto r = random_position(rng), s = random_position(rng);
      CHECK(relative_error(forward(shifted, r + offset, s + offset), forward(m, r, s)) <= 1e-12);
    }
  }
}

TEST_CASE("plain forward") {
  std::mt19937_64 rng(8);
  auto m = init_plain(spec(6, {8, 8}, 1), InputNorm{{0, 0, 0}, {1.5, 1.5, 1.5}}, {500.0, Part::imag, 1.0}, 12);
  int asymmetric = 0;
  for (int k = 0; k < 20; ++k) {
    const auto r = random_position(rng), s = random_position(rng);
    asymmetric += forward_plain(m, r, s) != forward_plain(m, s, r);
    CHECK(relative_error(forward_plain(m, r, s), reference_plain(m, r, s)) <= 1e-12);
  }
  CHECK(asymmetric == 20);
  m.params().block("net.W2").setZero();
  CHECK(forward_plain(m, random_position(rng), random_position(rng)) == 0.0);
}

TEST_CASE("predict_complex") {
  auto re = small_deepset(1);
  auto im = small_deepset(2);
  re.params().values.setZero();
  im.params().values.setZero();
  im.meta().part = Part::imag;
  const auto p = predict_complex(Model(re), Model(im), {0, 0, 0}, {1, 0, 0});
  CHECK(p.re == 0.0);
  CHECK(p.im == 0.0);

  auto re2 = small_deepset(3);
  auto im2 = small_deepset(4);
  re2.meta().target_scale = 2.0;
  im2.meta().target_scale = 0.5;
  const auto q = predict_complex(Model(re2), Model(im2), {0.1, 0, 0}, {1, 0.2, 0});
  CHECK(q.re == 2.0 * forward(re2, {0.1, 0, 0}, {1, 0.2, 0}));
  CHECK(q.im == 0.5 * forward(im2, {0.1, 0, 0}, {1, 0.2, 0}));

  im2.meta().frequency = 800.0;
  CHECK_THROWS_AS(predict_complex(Model(re2), Model(im2), {0, 0, 0}, {1, 0, 0}), DomainError);
}

TEST_CASE("as_scalar_field") {
  std::mt19937_64 rng(14);
  const InputNorm norm{{0.0, 0.0, 0.0}, {0.4, 0.4, 0.4}};
  Model m = small_deepset(31, norm);
  const auto& mf = as_scalar_field(m);
  CHECK(mf.receiver_coords == std::array<std::size_t, 3>{0, 1, 2});
  CHECK(mf.source_coords == std::array<std::size_t, 3>{3, 4, 5});
  for (int k = 0; k < 100; ++k) {
    const auto r = random_position(rng), s = random_position(rng);
    const std::vector<double> x{r.x, r.y, r.z, s.x, s.y, s.z};
    CHECK(diff::eval(mf.field, x, params_of(m)) == forward(m, r, s));
  }

  SUBCASE("zero model has zero Laplacian") {
    Model z = small_deepset(2);
    params_of(z).values.setZero();
    const std::vector<std::size_t> rc{0, 1, 2};
    CHECK(diff::laplacian(as_scalar_field(z).field, std::vector<double>{0.1, 0.2, 0.0, 1.0, 0.0, 0.0}, params_of(z), rc) == 0.0);
  }
  SUBCASE("derivatives are in physical units") {
    // Twin without normalization evaluated at normalized coordinates.
    auto twin = small_deepset(31, InputNorm{});
    const std::vector<std::size_t> rc{0, 1, 2};
    for (int k = 0; k < 10; ++k) {
      const auto r = random_position(rng, 0.3), s = random_position(rng);
      const auto rn = norm.apply(r), sn = norm.apply(s);
      const double physical = diff::laplacian(mf.field, std::vector<double>{r.x, r.y, r.z, s.x, s.y, s.z}, params_of(m), rc);
      const double normalized =
          diff::laplacian(twin.field().field, std::vector<double>{rn.x, rn.y, rn.z, sn.x, sn.y, sn.z}, twin.params(), rc);
      CHECK(relative_error(physical, normalized / (0.4 * 0.4)) <= 1e-12);
    }
  }
  SUBCASE("Laplacian matches second-order finite differences") {
    const std::vector<std::size_t> rc{0, 1, 2};
    for (int k = 0; k < 10; ++k) {
      const auto r = random_position(rng, 0.3), s = random_position(rng);
      const std::vector<double> x{r.x, r.y, r.z, s.x, s.y, s.z};
      const double got = diff::laplacian(mf.field, x, params_of(m), rc);
      const double want = fd_laplacian([&](const std::vector<double>& y) { return diff::eval(mf.field, y, params_of(m)); }, x, rc, 1e-4);
      CHECK(relative_error(got, want) <= 1e-4);
    }
  }
}

TEST_CASE("model files") {
  const auto dir = std::filesystem::temp_directory_path() / "pipinn_test_model";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(77);

  auto d = small_deepset(42, InputNorm{{0.01, 0.02, 0.0}, {0.3, 0.3, 0.3}});
  d.meta() = {1234.5, Part::imag, 0.0123456789};
  save_model(d, dir / "d.json");
  auto back = load_deepset(dir / "d.json");
  CHECK(back.params().values == d.params().values);
  CHECK(back.meta() == d.meta());
  CHECK(back.norm() == d.norm());
  CHECK(back.phi_spec() == d.phi_spec());
  for (int k = 0; k < 20; ++k) {
    const auto r = random_position(rng), s = random_position(rng);
    CHECK(forward(back, r, s) == forward(d, r, s));
  }

  auto p = init_plain(spec(6, {5}, 1), {}, {}, 3);
  save_model(p, dir / "p.json");
  CHECK(load_plain(dir / "p.json").params().values == p.params().values);
  CHECK_THROWS_AS(load_deepset(dir / "p.json"), SchemaError);
  CHECK_THROWS_AS(load_plain(dir / "d.json"), SchemaError);

  auto text = io::read_file(dir / "d.json");
  auto corrupt = text;
  corrupt.replace(corrupt.find("pipinn-model"), 12, "something-el");
  CHECK_THROWS_AS(parse_model(corrupt), SchemaError);
  auto version = text;
  version.replace(version.find("\"format_version\": 1"), 19, "\"format_version\": 9");
  CHECK_THROWS_AS(parse_model(version), SchemaError);
  CHECK_THROWS_AS(parse_model(text.substr(0, 40)), SchemaError);
  CHECK_THROWS_AS(load_model(dir / "missing.json"), IoError);
  std::filesystem::remove_all(dir);
}
