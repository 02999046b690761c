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

#include "cli_support.hpp"

#include <algorithm>
#include <exception>

#include "pipinn/io_util.hpp"

#ifndef PIPINN_VERSION
#define PIPINN_VERSION "unknown"
#endif

namespace pipinn::cli {

namespace fs = std::filesystem;

int exit_code_for_current_exception(std::string& message) {
  try {
    throw;
  } catch (const DivergenceError& e) {
    message = e.what();
    return kDivergence;
  } catch (const CoverageError& e) {
    message = e.what();
    return kCoverage;
  } catch (const ConfigError& e) {
    message = e.what();
    return kConfig;
  } catch (const DomainError& e) {
    message = e.what();
    return kConfig;
  } catch (const SingularityError& e) {
    message = e.what();
    return kConfig;
  } catch (const IoError& e) {
    message = e.what();
    return kIo;
  } catch (const SchemaError& e) {
    message = e.what();
    return kIo;
  } catch (const fs::filesystem_error& e) {
    message = e.what();
    return kIo;
  } catch (const std::exception& e) {
    message = e.what();
    return kFailure;
  }
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv, std::uint64_t seed)
    : command_(std::move(command)), argv_(std::move(argv)), seed_(seed), start_(std::chrono::steady_clock::now()) {}

void RunManifest::set_config(const nlohmann::json& effective_config) { config_ = effective_config; }

void RunManifest::add_input(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add_input(f);
    return;
  }
  inputs_.push_back({{"path", path.string()}, {"checksum", io::checksum(io::read_file(path))}});
}

void RunManifest::add_output(const fs::path& path) {
  outputs_.push_back({{"path", path.string()}, {"checksum", io::checksum(io::read_file(path))}});
}

void RunManifest::write(const fs::path& path, int exit_code, const std::string& error) const {
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json j = {{"command", command_},
                      {"argv", argv_},
                      {"tool_version", PIPINN_VERSION},
                      {"seed", seed_},
                      {"config", config_},
                      {"config_hash", io::checksum(config_.dump())},
                      {"inputs", inputs_},
                      {"outputs", outputs_},
                      {"details", details_},
                      {"wall_clock_s", seconds},
                      {"status", exit_code == kOk ? "ok" : "failed"},
                      {"exit_code", exit_code}};
  if (!error.empty()) j["error"] = error;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  io::write_file_atomic(path, j.dump(2) + "\n");
}

std::string model_file_name(double frequency, Part part) {
  return "model_" + io::shortest(frequency) + "_" + to_string(part) + ".json";
}

std::string loss_file_name(double frequency, Part part) {
  return "loss_" + io::shortest(frequency) + "_" + to_string(part) + ".csv";
}

std::string krr_file_name(double frequency) { return "krr_" + io::shortest(frequency) + ".json"; }

namespace {

std::vector<fs::path> files_with_prefix(const fs::path& dir, const std::string& prefix) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind(prefix, 0) == 0 && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<fs::path> model_files(const fs::path& dir) { return files_with_prefix(dir, "model_"); }

PinnModelSet load_model_dir(const fs::path& dir) {
  const auto files = model_files(dir);
  if (files.empty()) throw IoError("no model files in '" + dir.string() + "'");
  PinnModelSet set;
  for (const auto& f : files) set.add(load_model(f));
  return set;
}

KrrModelSet load_krr_dir(const fs::path& dir) {
  const auto files = files_with_prefix(dir, "krr_");
  if (files.empty()) throw IoError("no KRR model files in '" + dir.string() + "'");
  KrrModelSet set;
  for (const auto& f : files) {
    auto m = load_krr(f);
    const double f_hz = m.frequency;
    if (!set.emplace(f_hz, std::move(m)).second) throw SchemaError("duplicate KRR model for " + io::shortest(f_hz) + " Hz");
  }
  return set;
}

}  // namespace pipinn::cli
