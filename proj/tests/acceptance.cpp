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

// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pipinn/dataset_io.hpp"
#include "pipinn/eval_harness.hpp"
#include "pipinn/field_oracle.hpp"
#include "pipinn/io_util.hpp"
#include "pipinn/krr_baseline.hpp"
#include "pipinn/model.hpp"
#include "pipinn/pinn_trainer.hpp"
#include "test_support.hpp"

#ifndef PIPINN_CLI
#error "PIPINN_CLI must name the command-line tool"
#endif

namespace fs = std::filesystem;
using namespace pipinn;
using namespace pipinn::diff;
using pipinn::testing::central_difference;
using pipinn::testing::fd_laplacian;
using pipinn::testing::random_tiny_net;
using pipinn::testing::relative_error;

namespace {

// Criterion 1
constexpr int kSwapModels = 1000;
constexpr int kOraclePairs = 10000;
constexpr double kOracleSymmetryTol = 1e-12;
constexpr double kC1Seconds = 10.0;
// Criterion 2
constexpr int kDerivativeTrials = 50;
constexpr double kDerivativeTol = 1e-4;
constexpr double kSumOfSquaresTol = 1e-10;
constexpr double kC2Seconds = 30.0;
// Criterion 3
constexpr int kHelmholtzPoints = 1000;
constexpr double kHelmholtzTol = 1e-8;
constexpr double kC3Seconds = 10.0;
// Criterion 4
constexpr double kZeroPredictorTol = 1e-12;
// 10 log10(1/4), i.e. -6.0206 dB to four decimals.
constexpr double kHalfScaleDb = -6.0205999132796239;
constexpr double kHalfScaleTol = 1e-9;
// Criterion 5
constexpr double kTargetNmseDb = -10.0;
constexpr double kSecondsPerModel = 300.0;
// Criterion 6
constexpr std::size_t kAblationSteps = 2000;
constexpr int kFullBeatsNoPdeAtLeast = 2;
constexpr double kC6Seconds = 1200.0;
// Criterion 7
constexpr std::size_t kKrrAnchors = 50;
constexpr double kKrrReproductionTol = 1e-6;
// Criterion 8
constexpr double kImpulseTol = 1e-12;
constexpr double kCosineTolPerSample = 1e-9;

const std::vector<double> kFrequencies{500.0, 1000.0, 1500.0};

int failures = 0;

void report(int criterion, bool pass, const std::string& detail, double seconds) {
  if (!pass) ++failures;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", seconds);
  std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << "  (" << buf << ")"
            << std::endl;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

Position3 uniform_point(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

void criterion_1() {
  Stopwatch clock;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> width(2, 12);
  int model_mismatch = 0;
  for (int i = 0; i < kSwapModels; ++i) {
    MLPSpec phi{3, {static_cast<std::size_t>(width(rng))}, static_cast<std::size_t>(width(rng)),
                i % 2 == 0 ? Activation::tanh : Activation::sine};
    MLPSpec rho{phi.output_dim, {static_cast<std::size_t>(width(rng))}, 1, phi.activation};
    InputNorm norm;
    norm.center = uniform_point(rng, -0.5, 0.5);
    norm.scale = {0.3, 0.3, 0.3};
    const auto model = init_deepset(phi, rho, norm, {}, static_cast<std::uint64_t>(i));
    const Position3 r = uniform_point(rng, -2.0, 2.0), s = uniform_point(rng, -2.0, 2.0);
    if (forward(model, r, s) != forward(model, s, r)) ++model_mismatch;
  }
  double worst_free = 0.0, worst_floor = 0.0;
  std::uniform_real_distribution<double> uk(0.5, 40.0), beta(0.0, 1.0);
  for (int i = 0; i < kOraclePairs; ++i) {
    const Position3 r = uniform_point(rng, -1.0, 1.0), s = uniform_point(rng, -1.0, 1.0);
    if (distance(r, s) < 1e-3) continue;
    const double k = uk(rng);
    const auto a = green_free_field(r, s, k), b = green_free_field(s, r, k);
    worst_free = std::max(worst_free, std::abs(a.value() - b.value()) / std::abs(a.value()));
    const double bt = beta(rng);
    const auto c = green_floor_reflection(r, s, k, -1.2, bt), d = green_floor_reflection(s, r, k, -1.2, bt);
    worst_floor = std::max(worst_floor, std::abs(c.value() - d.value()) / std::abs(c.value()));
  }
  const double t = clock.seconds();
  const bool pass = model_mismatch == 0 && worst_free <= kOracleSymmetryTol && worst_floor <= kOracleSymmetryTol && t <= kC1Seconds;
  report(1, pass,
         "deep-set swap mismatches " + std::to_string(model_mismatch) + "/" + std::to_string(kSwapModels) +
             ", oracle max rel asymmetry free " + fmt(worst_free) + " floor " + fmt(worst_floor),
         t);
}

// A tiny deep-set model viewed as a field, or a tiny plain network.
struct TrialNet {
  ScalarField field;
  ParamVector params;
  std::size_t in_dim = 6;
};

TrialNet trial_net(std::mt19937_64& rng, int trial) {
  TrialNet t;
  if (trial % 2 == 0) {
    auto net = random_tiny_net(rng, 6, {6, 5}, trial % 4 == 2);
    t.field = net.field;
    t.params = net.params;
    return t;
  }
  MLPSpec phi{3, {6}, 4, trial % 4 == 1 ? Activation::tanh : Activation::sine};
  MLPSpec rho{4, {5}, 1, phi.activation};
  InputNorm norm;
  norm.scale = {0.7, 0.7, 0.7};
  const auto m = init_deepset(phi, rho, norm, {}, static_cast<std::uint64_t>(trial) + 1000);
  t.field = m.field().field;
  t.params = m.params();
  // Non-zero biases so every parameter block is exercised.
  std::normal_distribution<double> g(0.0, 0.3);
  for (Eigen::Index i = 0; i < t.params.values.size(); ++i) t.params.values(i) += g(rng);
  return t;
}

void criterion_2() {
  Stopwatch clock;
  std::mt19937_64 rng(202);
  const std::vector<std::size_t> coords{0, 1, 2};
  double worst_grad = 0.0, worst_lap = 0.0, worst_grad_lap = 0.0;
  for (int trial = 0; trial < kDerivativeTrials; ++trial) {
    const auto net = trial_net(rng, trial);
    const auto x = uniform_vector(rng, net.in_dim);
    const auto g = grad_params(net.field, x, net.params);
    const auto fd = central_difference(
        [&](const Eigen::VectorXd& p) {
          ParamVector q = net.params;
          q.values = p;
          return eval(net.field, x, q);
        },
        net.params.values, 1e-5);
    worst_grad = std::max(worst_grad, relative_error(g.values, fd));
  }
  for (int trial = 0; trial < kDerivativeTrials; ++trial) {
    const auto net = trial_net(rng, trial);
    const auto x = uniform_vector(rng, net.in_dim);
    const double got = laplacian(net.field, x, net.params, coords);
    const double want =
        fd_laplacian([&](const std::vector<double>& p) { return eval(net.field, p, net.params); }, x, coords, 1e-4);
    worst_lap = std::max(worst_lap, relative_error(got, want));
  }
  for (int trial = 0; trial < kDerivativeTrials; ++trial) {
    const auto net = trial_net(rng, trial);
    const auto x = uniform_vector(rng, net.in_dim);
    const auto g = grad_params_of_laplacian(net.field, x, net.params, coords);
    const auto fd = central_difference(
        [&](const Eigen::VectorXd& p) {
          ParamVector q = net.params;
          q.values = p;
          return laplacian(net.field, x, q, coords);
        },
        net.params.values, 1e-5);
    worst_grad_lap = std::max(worst_grad_lap, relative_error(g.values, fd));
  }
  ScalarField sq(3);
  auto in = sq.input({0, 1, 2});
  sq.set_output(sq.affine(sq.mul(in, in), Matrix::Ones(1, 3), Vector::Zero(1)));
  double worst_six = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto x = uniform_vector(rng, 3);
    worst_six = std::max(worst_six, std::abs(laplacian(sq, x, ParamVector{}, coords) - 6.0));
  }
  const double t = clock.seconds();
  const bool pass = worst_grad <= kDerivativeTol && worst_lap <= kDerivativeTol && worst_grad_lap <= kDerivativeTol &&
                    worst_six <= kSumOfSquaresTol && t <= kC2Seconds;
  report(2, pass,
         "max rel err grad " + fmt(worst_grad) + ", laplacian " + fmt(worst_lap) + ", grad of laplacian " +
             fmt(worst_grad_lap) + ", |lap(x^2+y^2+z^2) - 6| " + fmt(worst_six),
         t);
}

void criterion_3() {
  Stopwatch clock;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> beta(0.0, 1.0);
  const double floor_z = -1.2;
  double worst = 0.0;
  for (double k : {2.0, 27.5}) {
    const auto free_field = free_field_as_field(k);
    for (int i = 0; i < kHelmholtzPoints; ++i) {
      Position3 r, s;
      do {
        r = uniform_point(rng, -1.0, 1.0);
        s = uniform_point(rng, -1.0, 1.0);
      } while (distance(r, s) < 0.05);
      const double b = beta(rng);
      const auto reflected = floor_reflection_as_field(k, floor_z, b);
      const auto h1 = helmholtz_residual_numeric(free_field, r, s, k);
      const auto h2 = helmholtz_residual_numeric(reflected, r, s, k);
      const double p1 = std::abs(green_free_field(r, s, k).value());
      const double p2 = std::abs(green_floor_reflection(r, s, k, floor_z, b).value());
      worst = std::max(worst, std::hypot(h1.real, h1.imag) / (k * k * p1));
      worst = std::max(worst, std::hypot(h2.real, h2.imag) / (k * k * p2));
    }
  }
  const double t = clock.seconds();
  report(3, worst <= kHelmholtzTol && t <= kC3Seconds, "max |lap P + k^2 P| / (k^2 |P|) = " + fmt(worst), t);
}

void criterion_4() {
  Stopwatch clock;
  std::mt19937_64 rng(404);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ComplexPressure> truth(500), zero(500), half(500);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = {g(rng), g(rng)};
    half[i] = ComplexPressure(0.5 * truth[i].value());
  }
  const double exact = nmse(truth, truth), z = nmse(zero, truth), h = nmse(half, truth);
  const bool pass = exact == kExactNmse && std::abs(z) <= kZeroPredictorTol && std::abs(h - kHalfScaleDb) <= kHalfScaleTol;
  report(4, pass, "exact " + format_nmse(exact) + ", zero " + fmt(z) + " dB, half-scale " + io::shortest(h) + " dB",
         clock.seconds());
}

struct Criterion5Output {
  ScenarioConfig scenario;
  ATFDataset train;
  ATFDataset test;
  PinnModelSet models;
};

Criterion5Output criterion_5() {
  Stopwatch clock;
  Criterion5Output out{ScenarioConfig::measurement_mirror(kFrequencies), {}, {}, {}};
  out.train = synth_dataset(out.scenario, Split::train);
  out.test = synth_dataset(out.scenario, Split::test);
  const TrainConfig config;
  const auto bins = train_all_bins(out.train, TrainDomains::from_scenario(out.scenario), config, 1);
  double slowest = 0.0;
  std::string errors;
  for (const auto& b : bins) {
    slowest = std::max(slowest, b.seconds);
    if (b.result)
      out.models.add(b.result->model);
    else
      errors += " " + io::shortest(b.frequency) + "/" + to_string(b.part) + ": " + b.error;
  }
  bool pass = errors.empty() && slowest <= kSecondsPerModel;
  std::string detail = "train " + std::to_string(out.train.samples.size() / kFrequencies.size()) + " / test " +
                       std::to_string(out.test.samples.size() / kFrequencies.size()) + " pairs per bin; NMSE";
  if (errors.empty()) {
    const auto table = evaluate_method(pinn_predictor(out.models), out.test, "pinn", "full");
    for (const auto& row : table.rows) {
      pass = pass && row.nmse_db <= kTargetNmseDb;
      detail += " " + io::shortest(row.frequency) + " Hz " + fmt(row.nmse_db) + " dB";
    }
  } else {
    detail += " unavailable:" + errors;
  }
  detail += "; slowest model " + fmt(slowest) + " s";
  report(5, pass, detail, clock.seconds());
  return out;
}

void criterion_6(const Criterion5Output& c5) {
  Stopwatch clock;
  TrainConfig config;
  config.steps = kAblationSteps;
  std::string detail;
  bool pass = false;
  try {
    const auto result = run_ablation(c5.scenario, config, 1);
    int full_wins = 0;
    for (double f : kFrequencies) {
      double full = 0.0, no_pde = 0.0;
      for (const auto& row : result.table.rows) {
        if (row.frequency != f) continue;
        if (row.variant == "full") full = row.nmse_db;
        if (row.variant == "no_pde") no_pde = row.nmse_db;
      }
      if (full <= no_pde) ++full_wins;
      detail += io::shortest(f) + " Hz full " + fmt(full) + " / no_pde " + fmt(no_pde) + " dB; ";
    }
    bool probes = true;
    for (const auto& v : result.variants) {
      probes = probes && v.swap_invariant == uses_deepset(v.variant);
      detail += to_string(v.variant) + (v.swap_invariant ? " invariant; " : " not invariant; ");
    }
    pass = full_wins >= kFullBeatsNoPdeAtLeast && probes;
    detail += "full <= no_pde at " + std::to_string(full_wins) + "/3 (" + std::to_string(kAblationSteps) + " steps)";
  } catch (const std::exception& e) {
    detail = std::string("ablation failed: ") + e.what();
  }
  const double t = clock.seconds();
  report(6, pass && t <= kC6Seconds, detail, t);
}

void criterion_7(const Criterion5Output& c5) {
  Stopwatch clock;
  const double f = 500.0;
  const double k = wavenumber_of(f, kDefaultSpeedOfSound);
  std::mt19937_64 rng(707);
  std::vector<ATFSample> anchors;
  for (std::size_t i = 0; i < kKrrAnchors; ++i) {
    const Position3 r = uniform_point(rng, -1.0, 1.0);
    const Position3 s = Position3{3.0, 0.0, 0.0} + uniform_point(rng, -1.0, 1.0);
    anchors.push_back({r, s, f, green_free_field(r, s, k)});
  }
  std::string detail;
  bool pass = true;
  try {
    const auto model = fit(anchors, {k, true, 0.0});
    double worst = 0.0;
    for (const auto& a : anchors)
      worst = std::max(worst, std::abs(predict(model, a.receiver, a.source).value() - a.pressure.value()) /
                                  std::abs(a.pressure.value()));
    int asymmetric = 0;
    for (int i = 0; i < 1000; ++i) {
      const Position3 r = uniform_point(rng, -2.0, 2.0), s = uniform_point(rng, -2.0, 2.0);
      if (!(predict(model, r, s) == predict(model, s, r))) ++asymmetric;
    }
    pass = worst <= kKrrReproductionTol && asymmetric == 0;
    detail = "anchor max rel err " + fmt(worst) + ", asymmetric predictions " + std::to_string(asymmetric) + "/1000";
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("50-anchor fit failed: ") + e.what();
  }

  try {
    KrrModelSet krr;
    for (double fb : kFrequencies) {
      const auto samples = c5.train.at_frequency(fb);
      KernelConfig kc{wavenumber_of(fb, c5.train.speed_of_sound), true, 0.0};
      kc.sigma = select_regularization(samples, kc, {1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2}, 7);
      krr.emplace(fb, fit(samples, kc));
    }
    const auto table = compare_methods(c5.test, c5.models, krr);
    const auto fresh = synth_dataset(c5.scenario, Split::test);
    bool complete = table.rows.size() == 2 * kFrequencies.size();
    for (std::size_t i = 0; complete && i < kFrequencies.size(); ++i) {
      const auto& p = table.rows[2 * i];
      const auto& q = table.rows[2 * i + 1];
      complete = p.method == "pinn" && q.method == "krr" && p.frequency == kFrequencies[i] &&
                 q.frequency == kFrequencies[i] && p.n_pairs == q.n_pairs && p.n_pairs == 1920 &&
                 std::isfinite(p.nmse_db) && std::isfinite(q.nmse_db);
    }
    const bool same_set = table.dataset_checksum == dataset_checksum(fresh);
    pass = pass && complete && same_set;
    detail += "; table " + std::string(complete ? "complete" : "incomplete") + ", test checksum " + table.dataset_checksum +
              (same_set ? " verified" : " MISMATCH") + ";";
    for (const auto& row : table.rows) detail += " " + row.method + "@" + io::shortest(row.frequency) + " " + fmt(row.nmse_db);
  } catch (const std::exception& e) {
    pass = false;
    detail += std::string("; comparison failed: ") + e.what();
  }
  report(7, pass, detail, clock.seconds());
}

void criterion_8() {
  Stopwatch clock;
  const double fs = 8000.0;
  const std::size_t length = 4000;  // 0.5 s at 8 kHz
  std::vector<double> bins;
  for (std::size_t b = 1; b < length / 2; ++b) bins.push_back(static_cast<double>(b) * fs / static_cast<double>(length));

  RIRRecord impulse;
  impulse.sample_rate = fs;
  impulse.samples.assign(2 * length, 0.0);
  impulse.samples[0] = 1.0;
  double worst_impulse = 0.0;
  for (const auto& p : rir_to_atf(impulse, bins, 0.5))
    worst_impulse = std::max(worst_impulse, std::abs(p.value() - std::complex<double>(1.0, 0.0)));

  double worst_cosine = 0.0;
  for (std::size_t k0 : {1, 37, 500, 1999}) {
    RIRRecord cosine;
    cosine.sample_rate = fs;
    cosine.samples.resize(length);
    for (std::size_t n = 0; n < length; ++n)
      cosine.samples[n] = std::cos(2.0 * kPi * static_cast<double>(k0 * n % length) / static_cast<double>(length));
    const double f = static_cast<double>(k0) * fs / static_cast<double>(length);
    const auto p = rir_to_atf(cosine, {f}, 0.5).front();
    worst_cosine = std::max(worst_cosine, std::abs(std::abs(p.value()) - static_cast<double>(length) / 2.0));
  }

  bool truncation = true;
  std::string counts;
  for (double rate : {8000.0, 16000.0, 44100.0, 48000.0, 96000.0}) {
    RIRRecord r;
    r.sample_rate = rate;
    r.samples.assign(static_cast<std::size_t>(rate), 0.0);
    const auto expected = static_cast<std::size_t>(rate / 2.0);
    const auto got = truncated_length(r, 0.5);
    truncation = truncation && got == expected;
    counts += " " + std::to_string(got);
  }
  // Samples past the cut must not contribute.
  RIRRecord tail = impulse;
  for (std::size_t n = length; n < tail.samples.size(); ++n) tail.samples[n] = 1.0;
  truncation = truncation && rir_to_atf(tail, bins, 0.5) == rir_to_atf(impulse, bins, 0.5);

  const bool pass = worst_impulse <= kImpulseTol && worst_cosine <= kCosineTolPerSample * static_cast<double>(length) && truncation;
  report(8, pass,
         "impulse max |ATF - 1| " + fmt(worst_impulse) + " over " + std::to_string(bins.size()) + " bins, cosine max |(|ATF| - L/2)| " +
             fmt(worst_cosine) + ", 0.5 s sample counts" + counts,
         clock.seconds());
}

int run(const std::string& args) {
  const std::string command = std::string("\"") + PIPINN_CLI + "\" " + args + " >/dev/null 2>&1";
  return std::system(command.c_str());
}

std::vector<fs::path> artifacts(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto name = e.path().filename().string();
    if (name == "manifest.json" || name.ends_with(".manifest.json")) continue;
    out.push_back(fs::relative(e.path(), dir));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void criterion_9() {
  Stopwatch clock;
  const fs::path root = fs::temp_directory_path() / ("pipinn-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  io::write_file_atomic(root / "scenario.json", "{\"frequencies\": [500, 1000]}\n");
  bool commands_ok = true;
  for (const std::string run_dir : {"a", "b"}) {
    const fs::path d = root / run_dir;
    const std::string sc = (root / "scenario.json").string();
    commands_ok = commands_ok && run("synth " + sc + " --split train --out " + (d / "train.csv").string()) == 0;
    commands_ok = commands_ok && run("synth " + sc + " --split test --out " + (d / "test.csv").string()) == 0;
    commands_ok = commands_ok && run("train " + (d / "train.csv").string() + " --scenario " + sc +
                                     " --steps 60 --seed 11 --jobs 2 --out " + (d / "models").string()) == 0;
    commands_ok = commands_ok && run("eval " + (d / "test.csv").string() + " --pinn " + (d / "models").string() +
                                     " --out " + (d / "table.csv").string()) == 0;
  }
  const auto files_a = artifacts(root / "a"), files_b = artifacts(root / "b");
  std::size_t identical = 0;
  bool same_set = files_a == files_b;
  if (same_set)
    for (const auto& f : files_a)
      if (io::read_file(root / "a" / f) == io::read_file(root / "b" / f)) ++identical;
  const bool pass = commands_ok && same_set && !files_a.empty() && identical == files_a.size();
  report(9, pass,
         std::string(commands_ok ? "commands succeeded" : "a command failed") + ", " + std::to_string(identical) + "/" +
             std::to_string(files_a.size()) + " artifacts byte-identical across reruns",
         clock.seconds());
  fs::remove_all(root);
}

}  // namespace

// With no arguments every criterion runs; otherwise only the listed ones
// (6 and 7 imply 5, whose trained models they reuse).
int main(int argc, char** argv) {
  std::vector<bool> want(10, argc == 1);
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > 9) {
      std::cerr << "usage: acceptance [criterion 1-9 ...]\n";
      return 2;
    }
    want[static_cast<std::size_t>(c)] = true;
  }
  std::cout << "acceptance" << std::endl;
  if (want[1]) criterion_1();
  if (want[2]) criterion_2();
  if (want[3]) criterion_3();
  if (want[4]) criterion_4();
  if (want[5] || want[6] || want[7]) {
    const auto c5 = criterion_5();
    if (want[6]) criterion_6(c5);
    if (want[7]) criterion_7(c5);
  }
  if (want[8]) criterion_8();
  if (want[9]) criterion_9();
  std::cout << "acceptance: " << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
