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

#include "creps/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "creps/bench.hpp"
#include "creps/error.hpp"

namespace creps {
namespace {

void check_budget(const GeneratorConfig& config, int height, int width, std::uint64_t budget) {
  const std::uint64_t bytes = count_activations(config, config.mode, height, width).peak * sizeof(float);
  if (bytes > budget) {
    throw Error(ErrorCode::kBudgetExceeded,
                "rendering " + std::to_string(height) + "x" + std::to_string(width) + " needs ~" +
                    std::to_string(bytes >> 20) + " MiB of activations (budget " + std::to_string(budget >> 20) +
                    " MiB); render in tiles instead");
  }
}

CoordField outer_field(std::span<const double> e_r, std::span<const double> e_c) {
  CoordField field;
  field.height = static_cast<int>(e_r.size());
  field.width = static_cast<int>(e_c.size());
  field.rows.reserve(e_r.size() * e_c.size());
  field.cols.reserve(e_r.size() * e_c.size());
  for (double r : e_r) {
    for (double c : e_c) {
      field.rows.push_back(r);
      field.cols.push_back(c);
    }
  }
  return field;
}

// Image on the outer product grid e_r x e_c, in either mode.
FeatureMap<float> synthesize_grid(const StyleVector& w, std::span<const double> e_r, std::span<const double> e_c,
                                  const GeneratorWeights& weights, const GeneratorConfig& config) {
  if (config.mode == Mode::kBiline) return synthesize_styled(w, e_r, e_c, weights, config);
  return synthesize_dense_styled(w, outer_field(e_r, e_c), weights, config);
}

void put_pixel(Image8& image, int i, int j, const FeatureMap<float>& rgb, int si, int sj) {
  std::uint8_t* dst = image.pixels.data() + (static_cast<std::size_t>(i) * image.width + j) * 3;
  for (int c = 0; c < 3; ++c) dst[c] = quantize(rgb.at(c, si, sj));
}

Image8 blank(int height, int width) {
  Image8 image;
  image.height = height;
  image.width = width;
  image.pixels.assign(static_cast<std::size_t>(height) * width * 3, 0);
  return image;
}

}  // namespace

void RenderRequest::validate() const {
  if (height < 1 || width < 1) throw Error(ErrorCode::kInvalidArgument, "render resolution must be at least 1x1");
  transform.validate();
  if (tile_size && (*tile_size < 1 || *tile_size > std::max(height, width))) {
    throw Error(ErrorCode::kInvalidArgument, "tile size must be between 1 and the output resolution");
  }
}

Latent RenderRequest::resolve_latent(const GeneratorConfig& config) const {
  if (latent) {
    if (latent->size() != static_cast<std::size_t>(config.latent_dim)) {
      throw Error(ErrorCode::kShapeMismatch, "explicit latent length differs from latent_dim");
    }
    return *latent;
  }
  return latent_from_seed(seed, config.latent_dim);
}

std::uint8_t quantize(float value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::kNumeric, "non-finite value in synthesized image");
  const double unit = std::clamp((static_cast<double>(value) + 1.0) / 2.0, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::nearbyint(unit * 255.0));
}

Image8 to_image8(const FeatureMap<float>& rgb) {
  if (rgb.channels != 3) throw Error(ErrorCode::kShapeMismatch, "image export needs exactly 3 channels");
  Image8 image = blank(rgb.height, rgb.width);
  for (int i = 0; i < rgb.height; ++i) {
    for (int j = 0; j < rgb.width; ++j) put_pixel(image, i, j, rgb, i, j);
  }
  return image;
}

Image8 render(const RenderRequest& request, const GeneratorWeights& weights, const GeneratorConfig& config) {
  request.validate();
  config.validate();
  check_budget(config, request.height, request.width, request.memory_budget_bytes);
  const StyleVector w = map_latent(request.resolve_latent(config), weights, config);
  const CoordVector e_r = grid_coords(request.height, request.transform, Axis::kRow);
  const CoordVector e_c = grid_coords(request.width, request.transform, Axis::kColumn);
  return to_image8(synthesize_grid(w, e_r.values, e_c.values, weights, config));
}

Image8 render_tiled(const RenderRequest& request, const GeneratorWeights& weights, const GeneratorConfig& config) {
  request.validate();
  config.validate();
  const int tile = request.tile_size.value_or(std::max(request.height, request.width));
  check_budget(config, std::min(tile, request.height), std::min(tile, request.width), request.memory_budget_bytes);
  const StyleVector w = map_latent(request.resolve_latent(config), weights, config);
  const CoordVector e_r = grid_coords(request.height, request.transform, Axis::kRow);
  const CoordVector e_c = grid_coords(request.width, request.transform, Axis::kColumn);

  Image8 image = blank(request.height, request.width);
  for (int ti = 0; ti < request.height; ti += tile) {
    const int th = std::min(tile, request.height - ti);
    for (int tj = 0; tj < request.width; tj += tile) {
      const int tw = std::min(tile, request.width - tj);
      const FeatureMap<float> piece =
          synthesize_grid(w, std::span<const double>(e_r.values).subspan(static_cast<std::size_t>(ti), static_cast<std::size_t>(th)),
                          std::span<const double>(e_c.values).subspan(static_cast<std::size_t>(tj), static_cast<std::size_t>(tw)),
                          weights, config);
      for (int i = 0; i < th; ++i) {
        for (int j = 0; j < tw; ++j) put_pixel(image, ti + i, tj + j, piece, i, j);
      }
    }
  }
  return image;
}

Image8 render_warped(std::span<const float> latent, const CoordField& field, const GeneratorWeights& weights,
                     const GeneratorConfig& config, std::uint64_t memory_budget_bytes) {
  field.validate();
  config.validate();
  const StyleVector w = map_latent(latent, weights, config);
  if (config.mode == Mode::kDense) {
    check_budget(config, field.height, field.width, memory_budget_bytes);
    return to_image8(synthesize_dense_styled(w, field, weights, config));
  }
  check_budget(config, field.width, field.width, memory_budget_bytes);
  Image8 image = blank(field.height, field.width);
  const auto width = static_cast<std::size_t>(field.width);
  for (int i = 0; i < field.height; ++i) {
    const std::span<const double> e_r(field.rows.data() + static_cast<std::size_t>(i) * width, width);
    const std::span<const double> e_c(field.cols.data() + static_cast<std::size_t>(i) * width, width);
    const FeatureMap<float> intermediate = synthesize_styled(w, e_r, e_c, weights, config);
    for (int j = 0; j < field.width; ++j) put_pixel(image, i, j, intermediate, j, j);
  }
  return image;
}

Image8 render_pixelwise(std::span<const float> latent, const CoordField& field, const GeneratorWeights& weights,
                        const GeneratorConfig& config) {
  field.validate();
  config.validate();
  const StyleVector w = map_latent(latent, weights, config);
  Image8 image = blank(field.height, field.width);
  for (int i = 0; i < field.height; ++i) {
    for (int j = 0; j < field.width; ++j) {
      const double r = field.row(i, j);
      const double c = field.col(i, j);
      const FeatureMap<float> pixel = synthesize_grid(w, std::span<const double>(&r, 1), std::span<const double>(&c, 1), weights, config);
      put_pixel(image, i, j, pixel, 0, 0);
    }
  }
  return image;
}

}  // namespace creps
