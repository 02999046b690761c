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

#include "pipinn/krr_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "json.hpp"
#include "pipinn/io_util.hpp"
#include "pipinn/rng.hpp"

namespace pipinn {

namespace {

// Below this reciprocal condition estimate the solve is treated as singular.
constexpr double kMinRcond = 1e-14;

}  // namespace

void KernelConfig::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("kernel wavenumber must be > 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("regularization must be finite and >= 0");
}

double sinc0(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double kernel_eval(const KernelConfig& c, const Position3& r, const Position3& s, const Position3& r2, const Position3& s2) {
  const double direct = sinc0(c.k * distance(r, r2)) * sinc0(c.k * distance(s, s2));
  if (!c.symmetrize) return direct;
  const double swapped = sinc0(c.k * distance(r, s2)) * sinc0(c.k * distance(s, r2));
  return 0.5 * (direct + swapped);
}

KRRModel fit(const std::vector<ATFSample>& samples, const KernelConfig& config) {
  config.validate();
  if (samples.empty()) throw DomainError("kernel ridge regression needs at least one sample");
  const double f = samples.front().frequency;
  for (const auto& s : samples)
    if (s.frequency != f) throw DomainError("kernel ridge regression samples must share one frequency");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto& a = samples[static_cast<std::size_t>(i)];
      const auto& b = samples[static_cast<std::size_t>(j)];
      K(i, j) = K(j, i) = kernel_eval(config, a.receiver, a.source, b.receiver, b.source);
    }
  Eigen::MatrixXd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i, 0) = samples[static_cast<std::size_t>(i)].pressure.re;
    rhs(i, 1) = samples[static_cast<std::size_t>(i)].pressure.im;
  }

  KRRModel m;
  m.config = config;
  m.frequency = f;
  Eigen::MatrixXd A = K;
  A.diagonal().array() += config.sigma;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  bool ok = llt.info() == Eigen::Success && llt.rcond() >= kMinRcond;
  if (!ok && config.sigma > 0.0) {
    // One retry with a small jitter proportional to the mean diagonal.
    A.diagonal().array() += 1e-12 * A.trace() / static_cast<double>(n);
    llt.compute(A);
    ok = llt.info() == Eigen::Success && llt.rcond() >= kMinRcond;
    m.jittered = true;
  }
  if (!ok) {
    throw SingularityError(config.sigma == 0.0
                               ? "kernel system is numerically singular at sigma = 0; use a positive regularization"
                               : "kernel system is numerically singular even after jitter; increase the regularization");
  }
  m.gram_rcond = llt.rcond();
  const Eigen::MatrixXd alpha = llt.solve(rhs);
  if (!alpha.allFinite()) throw SingularityError("kernel solve produced non-finite weights");
  for (const auto& s : samples) {
    m.anchor_receivers.push_back(s.receiver);
    m.anchor_sources.push_back(s.source);
  }
  for (Eigen::Index i = 0; i < n; ++i) m.dual_weights.emplace_back(alpha(i, 0), alpha(i, 1));
  return m;
}

ComplexPressure predict(const KRRModel& model, const Position3& r, const Position3& s) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < model.dual_weights.size(); ++i) {
    const double kv = kernel_eval(model.config, r, s, model.anchor_receivers[i], model.anchor_sources[i]);
    re += model.dual_weights[i].real() * kv;
    im += model.dual_weights[i].imag() * kv;
  }
  return {re, im};
}

double select_regularization(const std::vector<ATFSample>& samples, const KernelConfig& config,
                             const std::vector<double>& sigma_grid, std::uint64_t seed) {
  if (sigma_grid.empty()) throw ConfigError("regularization grid is empty");
  std::vector<double> grid = sigma_grid;
  std::sort(grid.begin(), grid.end());
  if (grid.size() == 1) return grid.front();
  if (samples.size() < 2) throw DomainError("regularization selection needs at least two samples");

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(i + 1))]);
  const std::size_t n_train = std::clamp<std::size_t>((samples.size() * 4) / 5, 1, samples.size() - 1);
  std::vector<ATFSample> train, held;
  for (std::size_t i = 0; i < order.size(); ++i) (i < n_train ? train : held).push_back(samples[order[i]]);

  double best_sigma = grid.front();
  double best_err = std::numeric_limits<double>::infinity();
  for (double sigma : grid) {
    KernelConfig c = config;
    c.sigma = sigma;
    KRRModel m;
    try {
      m = fit(train, c);
    } catch (const SingularityError&) {
      continue;
    }
    double num = 0.0, den = 0.0;
    for (const auto& h : held) {
      num += std::norm(predict(m, h.receiver, h.source).value() - h.pressure.value());
      den += std::norm(h.pressure.value());
    }
    const double err = den > 0.0 ? num / den : num;
    if (err < best_err) {
      best_err = err;
      best_sigma = sigma;
    }
  }
  return best_sigma;
}

// ---------------------------------------------------------------------------
// Files

std::string serialize_krr(const KRRModel& m) {
  using nlohmann::json;
  json anchors = json::array();
  for (std::size_t i = 0; i < m.dual_weights.size(); ++i) {
    const auto& r = m.anchor_receivers[i];
    const auto& s = m.anchor_sources[i];
    json row = json::array();
    for (double v : {r.x, r.y, r.z, s.x, s.y, s.z, m.dual_weights[i].real(), m.dual_weights[i].imag()})
      row.push_back(io::hex_double(v));
    anchors.push_back(row);
  }
  json j = {{"format", "pipinn-krr"},
            {"format_version", kKrrFormatVersion},
            {"frequency", io::hex_double(m.frequency)},
            {"k", io::hex_double(m.config.k)},
            {"symmetrize", m.config.symmetrize},
            {"sigma", io::hex_double(m.config.sigma)},
            {"gram_rcond", io::hex_double(m.gram_rcond)},
            {"jittered", m.jittered},
            {"columns", "rx,ry,rz,sx,sy,sz,alpha_re,alpha_im"},
            {"anchors", anchors}};
  return j.dump() + "\n";
}

KRRModel parse_krr(const std::string& text) {
  using nlohmann::json;
  KRRModel m;
  try {
    const auto j = json::parse(text);
    if (j.value("format", "") != "pipinn-krr") throw SchemaError("not a pipinn KRR model");
    if (j.at("format_version").get<int>() != kKrrFormatVersion) throw SchemaError("unsupported KRR format version");
    auto hex = [&](const char* key) { return io::parse_hex_double(j.at(key).get<std::string>()); };
    m.frequency = hex("frequency");
    m.config.k = hex("k");
    m.config.sigma = hex("sigma");
    m.config.symmetrize = j.at("symmetrize").get<bool>();
    m.gram_rcond = hex("gram_rcond");
    m.jittered = j.at("jittered").get<bool>();
    for (const auto& row : j.at("anchors")) {
      if (!row.is_array() || row.size() != 8) throw SchemaError("KRR anchor rows must hold 8 values");
      double v[8];
      for (std::size_t i = 0; i < 8; ++i) v[i] = io::parse_hex_double(row[i].get<std::string>());
      m.anchor_receivers.push_back({v[0], v[1], v[2]});
      m.anchor_sources.push_back({v[3], v[4], v[5]});
      m.dual_weights.emplace_back(v[6], v[7]);
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed KRR model: ") + e.what());
  } catch (const DomainError& e) {
    throw SchemaError(std::string("malformed KRR model: ") + e.what());
  }
  try {
    m.config.validate();
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("malformed KRR model: ") + e.what());
  }
  return m;
}

void save_krr(const KRRModel& model, const std::filesystem::path& path) { io::write_file_atomic(path, serialize_krr(model)); }

KRRModel load_krr(const std::filesystem::path& path) { return parse_krr(io::read_file(path)); }

}  // namespace pipinn
