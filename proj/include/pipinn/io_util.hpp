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

// File plumbing shared by the dataset, model and table writers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace pipinn::io {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string checksum(std::string_view bytes);

// IEEE-754 bit pattern as 16 lowercase hex digits, and back.
std::string hex_double(double value);
double parse_hex_double(std::string_view text);

// Shortest decimal text that parses back to the same double.
std::string shortest(double value);

}  // namespace pipinn::io
