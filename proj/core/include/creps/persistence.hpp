// Copyright 2026 The CREPS Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace creps {

struct CoordField;
struct GeneratorConfig;

// One named tensor of the CREPSW01 container.
struct WeightEntry {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
};

// CREPSW01 layout, little-endian:
//   "CREPSW01" | u32 entry count | per entry: u16 name length, UTF-8 name,
//   u8 rank, rank x u32 dims, product(dims) x f32 row-major.
// Encoding validates entries first: kDuplicateName, kLengthMismatch.
// Decoding reports kBadMagic, kTruncated, kDuplicateName, kTrailingData, or
// kLengthMismatch when the last entry holds whole floats but fewer than its
// dims declare.
std::vector<std::uint8_t> encode_container(std::span<const WeightEntry> entries);
std::vector<WeightEntry> decode_container(std::span<const std::uint8_t> bytes);

void save_container(std::span<const WeightEntry> entries, const std::filesystem::path& path);
std::vector<WeightEntry> load_container(const std::filesystem::path& path);

// Strict JSON mirror of GeneratorConfig: unknown keys are rejected, absent
// keys take the desk-scale defaults, the result is validated.
GeneratorConfig parse_config(std::string_view json_text);
std::string config_to_json(const GeneratorConfig& config);
GeneratorConfig load_config(const std::filesystem::path& path);
void save_config(const GeneratorConfig& config, const std::filesystem::path& path);

// CFLD0001 layout, little-endian: "CFLD0001" | u32 H | u32 W | H*W (r, c)
// f32 pairs row-major. Values are quantized to 32-bit on save.
std::vector<std::uint8_t> encode_coord_field(const CoordField& field);
CoordField decode_coord_field(std::span<const std::uint8_t> bytes);
void save_coord_field(const CoordField& field, const std::filesystem::path& path);
CoordField load_coord_field(const std::filesystem::path& path);

// "iteration,mse" with a header line, one row per iteration.
void write_trace_csv(std::span<const double> mse_trace, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace creps
