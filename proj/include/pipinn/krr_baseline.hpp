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

// Kernel ridge regression over (receiver, source) pairs with a product of
// spherical-Bessel kernels, optionally symmetrised for reciprocity.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pipinn/core_types.hpp"

namespace pipinn {

struct KernelConfig {
  double k = 1.0;
  bool symmetrize = true;
  double sigma = 0.0;

  void validate() const;
};

// j0(x) = sin(x) / x with j0(0) = 1.
double sinc0(double x);

double kernel_eval(const KernelConfig& config, const Position3& r, const Position3& s, const Position3& r2,
                   const Position3& s2);

struct KRRModel {
  KernelConfig config;
  double frequency = 0.0;
  std::vector<Position3> anchor_receivers;
  std::vector<Position3> anchor_sources;
  std::vector<std::complex<double>> dual_weights;
  // Reciprocal condition estimate of the factorised system (1-norm).
  double gram_rcond = 0.0;
  bool jittered = false;
};

// Solves (K + sigma I) alpha = p. All samples must share one frequency.
// Throws SingularityError when the system is numerically singular.
KRRModel fit(const std::vector<ATFSample>& samples, const KernelConfig& config);

ComplexPressure predict(const KRRModel& model, const Position3& r, const Position3& s);

// Candidate with the lowest held-out NMSE on a seeded 80/20 split; ties and
// unstable candidates resolve toward the smallest sigma.
double select_regularization(const std::vector<ATFSample>& samples, const KernelConfig& config,
                             const std::vector<double>& sigma_grid, std::uint64_t seed);

inline constexpr int kKrrFormatVersion = 1;
std::string serialize_krr(const KRRModel& model);
KRRModel parse_krr(const std::string& text);
void save_krr(const KRRModel& model, const std::filesystem::path& path);
KRRModel load_krr(const std::filesystem::path& path);

}  // namespace pipinn
