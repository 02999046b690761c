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

// Shared plumbing for the command-line tool: exit codes, run manifests and
// model directory layout.

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pipinn/eval_harness.hpp"

namespace pipinn::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kIo = 3,
  kDivergence = 4,
  kCoverage = 5,
};

// Exit code for the exception currently being handled.
int exit_code_for_current_exception(std::string& message);

class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv, std::uint64_t seed);

  void set_config(const nlohmann::json& effective_config);
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  nlohmann::json& details() { return details_; }

  // Writes atomically; status is "ok" for code 0 and "failed" otherwise.
  void write(const std::filesystem::path& path, int exit_code, const std::string& error) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::uint64_t seed_;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json details_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point start_;
};

std::string model_file_name(double frequency, Part part);
std::string loss_file_name(double frequency, Part part);
std::string krr_file_name(double frequency);

// Every model_*.json in `dir`, in name order.
std::vector<std::filesystem::path> model_files(const std::filesystem::path& dir);
PinnModelSet load_model_dir(const std::filesystem::path& dir);
KrrModelSet load_krr_dir(const std::filesystem::path& dir);

}  // namespace pipinn::cli
