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
#include <optional>
#include <span>
#include <vector>

#include "creps/biline.hpp"
#include "creps/coords.hpp"
#include "creps/generator.hpp"

namespace creps {

// Interleaved 8-bit RGB, [height x width x 3].
struct Image8 {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;

  friend bool operator==(const Image8&, const Image8&) = default;
};

inline constexpr std::uint64_t kDefaultMemoryBudget = 4ull << 30;

struct RenderRequest {
  std::uint64_t seed = 0;
  std::optional<Latent> latent;  // overrides the seed-derived latent
  int height = 0;
  int width = 0;
  Transform transform;
  std::optional<int> tile_size;
  std::uint64_t memory_budget_bytes = kDefaultMemoryBudget;

  void validate() const;
  Latent resolve_latent(const GeneratorConfig& config) const;
};

// clamp((x + 1) / 2, 0, 1) * 255, rounded half-to-even.
std::uint8_t quantize(float value);
Image8 to_image8(const FeatureMap<float>& rgb);

Image8 render(const RenderRequest& request, const GeneratorWeights& weights, const GeneratorConfig& config);

// Synthesizes tile_size x tile_size pieces of the coordinate grid separately
// (w is mapped once) and reassembles them.
Image8 render_tiled(const RenderRequest& request, const GeneratorWeights& weights, const GeneratorConfig& config);

// Row-by-row diagonal sampling: row i comes from the W x W image synthesized
// on e_r = [r_ij]_j, e_c = [c_ij]_j.
Image8 render_warped(std::span<const float> latent, const CoordField& field, const GeneratorWeights& weights,
                     const GeneratorConfig& config, std::uint64_t memory_budget_bytes = kDefaultMemoryBudget);

// Reference oracle: one 1 x 1 synthesis per pixel.
Image8 render_pixelwise(std::span<const float> latent, const CoordField& field, const GeneratorWeights& weights,
                        const GeneratorConfig& config);

// Binary PPM ("P6", maxval 255).
std::vector<std::uint8_t> encode_ppm(const Image8& image);
Image8 decode_ppm(std::span<const std::uint8_t> bytes);
void write_image(const Image8& image, const std::filesystem::path& path);
// Channel-major [3 x H x W] with values byte / 255.
FeatureMap<double> read_image(const std::filesystem::path& path);
FeatureMap<double> to_unit_range(const Image8& image);

}  // namespace creps
