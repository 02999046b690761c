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

// Helpers shared by the unit and acceptance tests: tiny random networks built
// straight from the graph API, finite-difference oracles, and straight-line
// reference forward passes that never touch the engine.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "pipinn/diff_engine.hpp"

namespace pipinn::testing {

struct TinyNet {
  diff::ScalarField field;
  diff::ParamVector params;
  std::vector<std::size_t> widths;  // input, hidden..., 1
  bool use_sine = false;
};

// x -> [affine -> act]* -> affine -> scalar, with N(0, 0.6^2) weights and biases.
inline TinyNet random_tiny_net(std::mt19937_64& rng, std::size_t in_dim, std::vector<std::size_t> hidden, bool use_sine = false) {
  TinyNet net;
  net.use_sine = use_sine;
  net.widths.push_back(in_dim);
  for (auto h : hidden) net.widths.push_back(h);
  net.widths.push_back(1);
  diff::ParamLayout layout;
  std::vector<std::size_t> offsets;
  for (std::size_t l = 0; l + 1 < net.widths.size(); ++l) {
    offsets.push_back(layout.add("W" + std::to_string(l), net.widths[l + 1], net.widths[l]));
    layout.add("b" + std::to_string(l), net.widths[l + 1], 1);
  }
  net.field = diff::ScalarField(in_dim);
  std::vector<std::size_t> all(in_dim);
  for (std::size_t i = 0; i < in_dim; ++i) all[i] = i;
  auto x = net.field.input(all);
  for (std::size_t l = 0; l + 1 < net.widths.size(); ++l) {
    x = net.field.param_affine(x, net.widths[l + 1], offsets[l]);
    if (l + 2 < net.widths.size()) x = use_sine ? net.field.sine(x) : net.field.tanh(x);
  }
  net.field.set_output(x);
  net.params = diff::ParamVector(layout);
  std::normal_distribution<double> g(0.0, 0.6);
  for (Eigen::Index i = 0; i < net.params.values.size(); ++i) net.params.values(i) = g(rng);
  return net;
}

// Plain loops over the packed parameters; independent of the engine.
inline double reference_forward(const TinyNet& net, const std::vector<double>& x_in) {
  std::vector<double> x = x_in;
  std::size_t off = 0;
  const auto& p = net.params.values;
  for (std::size_t l = 0; l + 1 < net.widths.size(); ++l) {
    const std::size_t in = net.widths[l], out = net.widths[l + 1];
    std::vector<double> y(out, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      double acc = p(static_cast<Eigen::Index>(off + in * out + r));
      for (std::size_t c = 0; c < in; ++c) acc += p(static_cast<Eigen::Index>(off + r * in + c)) * x[c];
      y[r] = (l + 2 < net.widths.size()) ? (net.use_sine ? std::sin(acc) : std::tanh(acc)) : acc;
    }
    off += in * out + out;
    x = std::move(y);
  }
  return x[0];
}

inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& at,
                                          double step) {
  Eigen::VectorXd g(at.size());
  Eigen::VectorXd p = at;
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    const double saved = p(i);
    p(i) = saved + step;
    const double up = f(p);
    p(i) = saved - step;
    const double down = f(p);
    p(i) = saved;
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

// Sum of second-order central differences along the chosen coordinates.
inline double fd_laplacian(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                           const std::vector<std::size_t>& coords, double step) {
  const double centre = f(x);
  double lap = 0.0;
  for (auto c : coords) {
    const double saved = x[c];
    x[c] = saved + step;
    const double up = f(x);
    x[c] = saved - step;
    const double down = f(x);
    x[c] = saved;
    lap += (up - 2.0 * centre + down) / (step * step);
  }
  return lap;
}

// Infinity-norm error relative to the infinity norm of the reference.
inline double relative_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-12);
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

inline double relative_error(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-12); }

}  // namespace pipinn::testing
