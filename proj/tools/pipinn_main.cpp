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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "pipinn/dataset_io.hpp"
#include "pipinn/field_oracle.hpp"
#include "pipinn/io_util.hpp"
#include "pipinn/json_util.hpp"
#include "pipinn/scenario_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pipinn;
using namespace pipinn::cli;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string config;
  std::string out;
};

void require_out(const Globals& g) {
  if (g.out.empty()) throw ConfigError("--out is required");
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

Position3 to_position(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw ConfigError(std::string(what) + " needs three comma-separated values");
  return {v[0], v[1], v[2]};
}

ATFDataset only_frequencies(ATFDataset dataset, const std::vector<double>& keep) {
  if (keep.empty()) return dataset;
  const auto present = dataset.frequencies();
  for (double f : keep)
    if (std::find(present.begin(), present.end(), f) == present.end())
      throw CoverageError("dataset has no samples at " + io::shortest(f) + " Hz");
  std::erase_if(dataset.samples,
                [&](const ATFSample& s) { return std::find(keep.begin(), keep.end(), s.frequency) == keep.end(); });
  return dataset;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string scenario;
  std::string split = "test";
};

int cmd_synth(const Globals& g, const SynthArgs& a, RunManifest& m) {
  require_out(g);
  m.add_input(a.scenario);
  const auto scenario = load_scenario(a.scenario);
  const Split split = split_from_string(a.split);
  m.set_config({{"scenario", json::parse(scenario_to_json(scenario))}, {"split", to_string(split)}});
  const auto dataset = synth_dataset(scenario, split);
  ensure_parent(g.out);
  save_dataset(dataset, g.out);
  m.add_output(g.out);
  m.details()["samples"] = dataset.samples.size();
  return kOk;
}

// ---- ingest -----------------------------------------------------------------

struct IngestArgs {
  std::string manifest;
};

int cmd_ingest(const Globals& g, const IngestArgs& a, RunManifest& m) {
  require_out(g);
  m.add_input(a.manifest);
  const auto dataset = ingest_rir_directory(a.manifest);
  ensure_parent(g.out);
  save_dataset(dataset, g.out);
  m.add_output(g.out);
  m.details()["samples"] = dataset.samples.size();
  return kOk;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::string dataset;
  std::string scenario;
  std::string variant;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> n_pde;
  std::optional<double> lambda;
  std::vector<double> frequencies;
};

// Defaults, then the --config file, then explicit flags.
TrainConfig effective_train_config(const Globals& g, const std::string& variant, const std::optional<std::size_t>& steps,
                                   const std::optional<std::size_t>& n_pde, const std::optional<double>& lambda) {
  TrainConfig c = g.config.empty() ? TrainConfig{} : train_config_from_json(io::read_file(g.config));
  if (!variant.empty()) c.variant = variant_from_string(variant);
  if (steps) c.steps = *steps;
  if (n_pde) c.n_pde = *n_pde;
  if (lambda) c.lambda = *lambda;
  if (g.seed) c.seed = *g.seed;
  c.validate();
  return c;
}

json bin_summary(const BinResult& b) {
  json j = {{"frequency", b.frequency}, {"part", to_string(b.part)}, {"seconds", b.seconds}};
  if (b.result) {
    const auto& last = b.result->report.records.back();
    j["status"] = "ok";
    j["laplacian_evaluations"] = b.result->laplacian_evaluations;
    j["final"] = {{"l_data", last.l_data}, {"l_pde", last.l_pde}, {"l_total", last.l_total}};
  } else {
    j["status"] = b.divergence ? "diverged" : "failed";
    j["error"] = b.error;
    if (b.divergence) j["laplacian_evaluations"] = nullptr;
  }
  return j;
}

// Writes model and loss files for every bin; returns the number of failed bins.
std::size_t write_bins(const std::vector<BinResult>& bins, const fs::path& dir, RunManifest& m, json& summary) {
  fs::create_directories(dir);
  std::size_t failed = 0;
  summary = json::array();
  for (const auto& b : bins) {
    summary.push_back(bin_summary(b));
    const fs::path loss = dir / loss_file_name(b.frequency, b.part);
    if (b.result) {
      const fs::path model = dir / model_file_name(b.frequency, b.part);
      save_model(b.result->model, model);
      io::write_file_atomic(loss, b.result->report.to_csv());
      m.add_output(model);
      m.add_output(loss);
    } else {
      ++failed;
      if (b.divergence) {
        io::write_file_atomic(loss, b.divergence->report().to_csv());
        m.add_output(loss);
      }
    }
  }
  return failed;
}

int cmd_train(const Globals& g, const TrainArgs& a, RunManifest& m) {
  require_out(g);
  m.add_input(a.dataset);
  if (!g.config.empty()) m.add_input(g.config);
  const TrainConfig config = effective_train_config(g, a.variant, a.steps, a.n_pde, a.lambda);
  const auto dataset = only_frequencies(load_dataset(a.dataset), a.frequencies);
  TrainDomains domains = TrainDomains::from_dataset(dataset);
  json cfg = {{"train", json::parse(train_config_to_json(config))}, {"jobs", g.jobs}};
  if (!a.scenario.empty()) {
    m.add_input(a.scenario);
    const auto scenario = load_scenario(a.scenario);
    domains = TrainDomains::from_scenario(scenario);
    cfg["scenario"] = json::parse(scenario_to_json(scenario));
  }
  if (!a.frequencies.empty()) cfg["frequencies"] = a.frequencies;
  m.set_config(cfg);

  const auto bins = train_all_bins(dataset, domains, config, g.jobs);
  json summary;
  const std::size_t failed = write_bins(bins, g.out, m, summary);
  m.details()["bins"] = summary;
  for (const auto& b : bins)
    if (b.divergence) throw *b.divergence;
  if (failed > 0) throw Error(std::to_string(failed) + " bin(s) failed to train");
  return kOk;
}

// ---- predict ----------------------------------------------------------------

struct PredictArgs {
  std::string models;
  std::string input;
  std::vector<double> receiver;
  std::vector<double> source;
  std::optional<double> frequency;
};

int cmd_predict(const Globals& g, const PredictArgs& a, RunManifest& m) {
  m.add_input(a.models);
  const auto set = load_model_dir(a.models);
  const auto predictor = pinn_predictor(set);
  if (!a.input.empty()) {
    require_out(g);
    m.add_input(a.input);
    auto dataset = load_dataset(a.input);
    for (double f : dataset.frequencies()) {
      std::vector<std::size_t> idx;
      std::vector<Position3> r, s;
      for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        if (dataset.samples[i].frequency == f) {
          idx.push_back(i);
          r.push_back(dataset.samples[i].receiver);
          s.push_back(dataset.samples[i].source);
        }
      const auto p = predictor(f, r, s);
      for (std::size_t i = 0; i < idx.size(); ++i) dataset.samples[idx[i]].pressure = p[i];
    }
    dataset.label += "/predicted";
    ensure_parent(g.out);
    save_dataset(dataset, g.out);
    m.add_output(g.out);
    return kOk;
  }
  if (!a.frequency || a.receiver.empty() || a.source.empty())
    throw ConfigError("predict needs --input, or --receiver, --source and --frequency");
  const Position3 r = to_position(a.receiver, "--receiver");
  const Position3 s = to_position(a.source, "--source");
  const auto p = predictor(*a.frequency, {r}, {s}).front();
  const std::string line = "p_re,p_im\n" + io::shortest(p.re) + "," + io::shortest(p.im) + "\n";
  if (g.out.empty()) {
    std::cout << line;
  } else {
    ensure_parent(g.out);
    io::write_file_atomic(g.out, line);
    m.add_output(g.out);
  }
  return kOk;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string test;
  std::string pinn;
  std::string krr;
  std::string oracle;
};

int cmd_eval(const Globals& g, const EvalArgs& a, RunManifest& m) {
  require_out(g);
  if (a.pinn.empty() && a.krr.empty() && a.oracle.empty())
    throw ConfigError("eval needs at least one of --pinn, --krr, --oracle");
  json cfg = {{"test", a.test}, {"pinn", a.pinn}, {"krr", a.krr}, {"oracle", a.oracle}};
  m.set_config(cfg);
  m.add_input(a.test);
  const auto test = load_dataset(a.test);
  std::optional<PinnModelSet> pinn;
  std::optional<KrrModelSet> krr;
  if (!a.pinn.empty()) {
    m.add_input(a.pinn);
    pinn = load_model_dir(a.pinn);
  }
  if (!a.krr.empty()) {
    m.add_input(a.krr);
    krr = load_krr_dir(a.krr);
  }

  NMSETable table;
  if (pinn && krr) {
    table = compare_methods(test, *pinn, *krr);
  } else if (pinn) {
    table = evaluate_method(pinn_predictor(*pinn), test, "pinn");
  } else if (krr) {
    table = evaluate_method(krr_predictor(*krr), test, "krr");
  }
  if (!a.oracle.empty()) {
    m.add_input(a.oracle);
    const auto scenario = load_scenario(a.oracle);
    const auto rows = evaluate_method(oracle_predictor(scenario), test, "oracle").rows;
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  table.dataset_checksum = dataset_checksum(test);
  table.config_hash = io::checksum(cfg.dump());
  ensure_parent(g.out);
  io::write_file_atomic(g.out, table.to_csv());
  m.add_output(g.out);
  m.details()["dataset_checksum"] = table.dataset_checksum;
  return kOk;
}

// ---- ablate -----------------------------------------------------------------

struct AblateArgs {
  std::string scenario;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> n_pde;
};

int cmd_ablate(const Globals& g, const AblateArgs& a, RunManifest& m) {
  require_out(g);
  m.add_input(a.scenario);
  if (!g.config.empty()) m.add_input(g.config);
  const auto scenario = load_scenario(a.scenario);
  const TrainConfig config = effective_train_config(g, "", a.steps, a.n_pde, std::nullopt);
  m.set_config({{"scenario", json::parse(scenario_to_json(scenario))},
                {"train", json::parse(train_config_to_json(config))},
                {"jobs", g.jobs}});
  const auto result = run_ablation(scenario, config, g.jobs);
  const fs::path dir = g.out;
  fs::create_directories(dir);
  std::string probe = "variant,swap_invariant\n";
  json variants = json::array();
  for (const auto& v : result.variants) {
    probe += to_string(v.variant) + "," + (v.swap_invariant ? "true" : "false") + "\n";
    json summary;
    write_bins(v.bins, dir / to_string(v.variant), m, summary);
    variants.push_back({{"variant", to_string(v.variant)}, {"bins", summary}});
  }
  io::write_file_atomic(dir / "ablation.csv", result.table.to_csv());
  io::write_file_atomic(dir / "swap_probe.csv", probe);
  m.add_output(dir / "ablation.csv");
  m.add_output(dir / "swap_probe.csv");
  m.details()["variants"] = variants;
  m.details()["dataset_checksum"] = result.table.dataset_checksum;
  return kOk;
}

// ---- baseline ---------------------------------------------------------------

struct BaselineArgs {
  std::string dataset;
  std::optional<double> sigma;
};

struct KrrOptions {
  bool symmetrize = true;
  double sigma = 1e-6;
  std::vector<double> sigma_grid;
  std::uint64_t seed = 0;
};

KrrOptions krr_options_from_json(const std::string& text) {
  const std::string what = "krr config";
  const auto j = parse_config_json(text, what);
  require_object(j, what);
  reject_unknown_keys(j, {"symmetrize", "sigma", "sigma_grid", "seed"}, what);
  KrrOptions o;
  read_optional(j, "symmetrize", o.symmetrize, what);
  read_optional(j, "sigma", o.sigma, what);
  read_optional(j, "sigma_grid", o.sigma_grid, what);
  read_optional(j, "seed", o.seed, what);
  return o;
}

int cmd_baseline(const Globals& g, const BaselineArgs& a, RunManifest& m) {
  require_out(g);
  m.add_input(a.dataset);
  KrrOptions o;
  if (!g.config.empty()) {
    m.add_input(g.config);
    o = krr_options_from_json(io::read_file(g.config));
  }
  if (a.sigma) {
    o.sigma = *a.sigma;
    o.sigma_grid.clear();
  }
  if (g.seed) o.seed = *g.seed;
  m.set_config({{"symmetrize", o.symmetrize}, {"sigma", o.sigma}, {"sigma_grid", o.sigma_grid}, {"seed", o.seed}});

  const auto dataset = load_dataset(a.dataset);
  const fs::path dir = g.out;
  fs::create_directories(dir);
  json fits = json::array();
  for (double f : dataset.frequencies()) {
    const auto samples = dataset.at_frequency(f);
    KernelConfig kc{wavenumber_of(f, dataset.speed_of_sound), o.symmetrize, o.sigma};
    if (!o.sigma_grid.empty()) kc.sigma = select_regularization(samples, kc, o.sigma_grid, o.seed);
    const auto model = fit(samples, kc);
    const fs::path path = dir / krr_file_name(f);
    save_krr(model, path);
    m.add_output(path);
    fits.push_back({{"frequency", f}, {"sigma", kc.sigma}, {"gram_rcond", model.gram_rcond}, {"jittered", model.jittered}});
  }
  m.details()["fits"] = fits;
  return kOk;
}

// ---- heatmap ----------------------------------------------------------------

struct HeatmapArgs {
  std::string scenario;
  std::string pinn;
  std::string krr;
  bool oracle = false;
  std::optional<std::size_t> source_index;
  std::vector<double> source;
  double frequency = 0.0;
  std::string part = "real";
  std::vector<double> bounds;
  std::size_t nx = 57;
  std::size_t ny = 57;
  std::optional<double> z;
};

int cmd_heatmap(const Globals& g, const HeatmapArgs& a, RunManifest& m) {
  require_out(g);
  m.add_input(a.scenario);
  const auto scenario = load_scenario(a.scenario);
  if (static_cast<int>(!a.pinn.empty()) + static_cast<int>(!a.krr.empty()) + static_cast<int>(a.oracle) != 1)
    throw ConfigError("heatmap needs exactly one of --pinn, --krr, --oracle");
  if (a.source_index.has_value() == !a.source.empty()) throw ConfigError("heatmap needs exactly one of --source, --source-index");
  Position3 source;
  if (a.source_index) {
    const auto sources = scenario.sources();
    if (*a.source_index >= sources.size()) throw ConfigError("--source-index out of range");
    source = sources[*a.source_index];
  } else {
    source = to_position(a.source, "--source");
  }
  const DomainBox domain = scenario.receiver_domain();
  GridSpec grid;
  if (!a.bounds.empty()) {
    if (a.bounds.size() != 4) throw ConfigError("--bounds needs xmin,xmax,ymin,ymax");
    grid.x_min = a.bounds[0];
    grid.x_max = a.bounds[1];
    grid.y_min = a.bounds[2];
    grid.y_max = a.bounds[3];
  } else {
    grid.x_min = domain.min_corner.x;
    grid.x_max = domain.max_corner.x;
    grid.y_min = domain.min_corner.y;
    grid.y_max = domain.max_corner.y;
  }
  grid.z = a.z.value_or(domain.min_corner.z);
  grid.nx = a.nx;
  grid.ny = a.ny;
  const Part part = part_from_string(a.part);

  std::optional<PinnModelSet> pinn;
  std::optional<KrrModelSet> krr;
  Predictor predictor;
  std::string method;
  if (!a.pinn.empty()) {
    m.add_input(a.pinn);
    pinn = load_model_dir(a.pinn);
    predictor = pinn_predictor(*pinn);
    method = "pinn";
  } else if (!a.krr.empty()) {
    m.add_input(a.krr);
    krr = load_krr_dir(a.krr);
    predictor = krr_predictor(*krr);
    method = "krr";
  } else {
    predictor = oracle_predictor(scenario);
    method = "oracle";
  }
  m.set_config({{"method", method},
                {"frequency", a.frequency},
                {"part", to_string(part)},
                {"source", {source.x, source.y, source.z}},
                {"grid",
                 {{"x", {grid.x_min, grid.x_max}}, {"y", {grid.y_min, grid.y_max}}, {"z", grid.z}, {"nx", grid.nx}, {"ny", grid.ny}}}});
  const auto h = export_heatmap(predictor, source, a.frequency, grid, part, domain);
  ensure_parent(g.out);
  io::write_file_atomic(g.out, h.to_csv());
  m.add_output(g.out);
  return kOk;
}

fs::path manifest_path(const std::string& command, const std::string& out) {
  if (command == "train" || command == "ablate" || command == "baseline") return fs::path(out) / "manifest.json";
  return fs::path(out + ".manifest.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed deep-set sound field reconstruction"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (overrides the config file)");
  app.add_option("--jobs", g.jobs, "Maximum number of bins trained concurrently")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "Command configuration file (train or KRR settings)");
  app.add_option("--out", g.out, "Output file or directory");

  SynthArgs synth;
  auto* s_synth = app.add_subcommand("synth", "Synthesize an ATF dataset from a scenario");
  s_synth->add_option("scenario", synth.scenario, "Scenario JSON")->required();
  s_synth->add_option("--split", synth.split, "train or test")->check(CLI::IsMember({"train", "test"}));

  IngestArgs ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Convert measured RIRs listed in a manifest into an ATF dataset");
  s_ingest->add_option("manifest", ingest.manifest, "RIR manifest JSON")->required();

  TrainArgs train;
  auto* s_train = app.add_subcommand("train", "Train one model per (frequency, part)");
  s_train->add_option("dataset", train.dataset, "Training dataset")->required();
  s_train->add_option("--scenario", train.scenario, "Scenario JSON defining the collocation domains");
  s_train->add_option("--variant", train.variant, "full, no_pde, plain_pinn or plain");
  s_train->add_option("--steps", train.steps, "Optimizer steps");
  s_train->add_option("--n-pde", train.n_pde, "Collocation points per step");
  s_train->add_option("--lambda", train.lambda, "PDE loss weight");
  s_train->add_option("--frequency", train.frequencies, "Train only these frequencies")->delimiter(',');

  PredictArgs predict;
  auto* s_predict = app.add_subcommand("predict", "Predict pressures with trained models");
  s_predict->add_option("models", predict.models, "Model directory")->required();
  s_predict->add_option("--input", predict.input, "Dataset whose positions and frequencies are predicted");
  s_predict->add_option("--receiver", predict.receiver, "x,y,z")->delimiter(',');
  s_predict->add_option("--source", predict.source, "x,y,z")->delimiter(',');
  s_predict->add_option("--frequency", predict.frequency, "Hz");

  EvalArgs eval;
  auto* s_eval = app.add_subcommand("eval", "Score models on a test dataset (NMSE per frequency)");
  s_eval->add_option("test", eval.test, "Test dataset")->required();
  s_eval->add_option("--pinn", eval.pinn, "PINN model directory");
  s_eval->add_option("--krr", eval.krr, "KRR model directory");
  s_eval->add_option("--oracle", eval.oracle, "Scenario JSON whose closed-form field is scored");

  AblateArgs ablate;
  auto* s_ablate = app.add_subcommand("ablate", "Train and score the four model variants on a scenario");
  s_ablate->add_option("scenario", ablate.scenario, "Scenario JSON")->required();
  s_ablate->add_option("--steps", ablate.steps, "Optimizer steps");
  s_ablate->add_option("--n-pde", ablate.n_pde, "Collocation points per step");

  BaselineArgs baseline;
  auto* s_baseline = app.add_subcommand("baseline", "Fit kernel ridge regression models per frequency");
  s_baseline->add_option("dataset", baseline.dataset, "Training dataset")->required();
  s_baseline->add_option("--sigma", baseline.sigma, "Regularization (disables grid selection)");

  HeatmapArgs heat;
  auto* s_heat = app.add_subcommand("heatmap", "Export a predicted field slice over a receiver grid");
  s_heat->add_option("scenario", heat.scenario, "Scenario JSON (receiver domain and sources)")->required();
  s_heat->add_option("--pinn", heat.pinn, "PINN model directory");
  s_heat->add_option("--krr", heat.krr, "KRR model directory");
  s_heat->add_flag("--oracle", heat.oracle, "Use the scenario's closed-form field");
  s_heat->add_option("--source-index", heat.source_index, "Index into the scenario sources");
  s_heat->add_option("--source", heat.source, "x,y,z")->delimiter(',');
  s_heat->add_option("--frequency", heat.frequency, "Hz")->required();
  s_heat->add_option("--part", heat.part, "real or imag")->check(CLI::IsMember({"real", "imag"}));
  s_heat->add_option("--bounds", heat.bounds, "xmin,xmax,ymin,ymax")->delimiter(',');
  s_heat->add_option("--nx", heat.nx, "Grid points along x")->check(CLI::PositiveNumber);
  s_heat->add_option("--ny", heat.ny, "Grid points along y")->check(CLI::PositiveNumber);
  s_heat->add_option("--z", heat.z, "Height of the slice");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  RunManifest manifest(command, std::vector<std::string>(argv, argv + argc), g.seed.value_or(0));
  int code = kOk;
  std::string error;
  try {
    if (command == "synth") code = cmd_synth(g, synth, manifest);
    else if (command == "ingest") code = cmd_ingest(g, ingest, manifest);
    else if (command == "train") code = cmd_train(g, train, manifest);
    else if (command == "predict") code = cmd_predict(g, predict, manifest);
    else if (command == "eval") code = cmd_eval(g, eval, manifest);
    else if (command == "ablate") code = cmd_ablate(g, ablate, manifest);
    else if (command == "baseline") code = cmd_baseline(g, baseline, manifest);
    else if (command == "heatmap") code = cmd_heatmap(g, heat, manifest);
  } catch (...) {
    code = exit_code_for_current_exception(error);
    std::cerr << "pipinn " << command << ": " << error << "\n";
  }
  if (!g.out.empty()) {
    try {
      manifest.write(manifest_path(command, g.out), code, error);
    } catch (const std::exception& e) {
      std::cerr << "pipinn " << command << ": cannot write manifest: " << e.what() << "\n";
      if (code == kOk) code = kIo;
    }
  }
  return code;
}
