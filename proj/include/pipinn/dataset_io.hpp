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

// ATF dataset files: one JSON header line followed by a CSV body
//   rx,ry,rz,sx,sy,sz,f_hz,p_re,p_im
// with every number written in shortest round-trip decimal form.

#include <filesystem>
#include <string>

#include "pipinn/core_types.hpp"

namespace pipinn {

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr const char* kDatasetColumns = "rx,ry,rz,sx,sy,sz,f_hz,p_re,p_im";

std::string serialize_dataset(const ATFDataset& dataset);
// Throws SchemaError on malformed content and on any validate_dataset violation.
ATFDataset parse_dataset(const std::string& text);

void save_dataset(const ATFDataset& dataset, const std::filesystem::path& path);
ATFDataset load_dataset(const std::filesystem::path& path);

}  // namespace pipinn
