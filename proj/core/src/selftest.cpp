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

#include "creps/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "creps/biline.hpp"
#include "creps/fitter.hpp"
#include "creps/renderer.hpp"
#include "creps/rng.hpp"

namespace creps {
namespace {

std::string format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  return buf;
}

SelfTestCheck compose_check(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 10));
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    BilineFeature<double> b(3, 7 + trial % 5, 5 + trial % 7, 1 + trial % 6);
    b.row_half = rng.normal_vector<double>(b.row_half.size());
    b.col_half = rng.normal_vector<double>(b.col_half.size());
    const FeatureMap<double> f = compose(b);
    for (int c = 0; c < b.channels; ++c) {
      for (int i = 0; i < b.height; ++i) {
        for (int j = 0; j < b.width; ++j) {
          double ref = 0.0;
          for (int d = 0; d < b.thickness; ++d) ref += b.row(c, i, d) * b.col(c, j, d);
          worst = std::max(worst, std::abs(ref - f.at(c, i, j)));
        }
      }
    }
  }
  return {"compose brute force", worst <= 1e-12, format("max abs err %.3g", worst)};
}

SelfTestCheck gradient_check_case(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 11));
  const auto image = rng.uniform_vector<double>(64);
  const double err = gradient_check(image, 8, 8, 2, derive_seed(seed, 12));
  return {"gradient check", err <= 1e-4, format("max rel err %.3g", err)};
}

SelfTestCheck subset_purity(const StyleVector& w, const GeneratorWeights& weights, const GeneratorConfig& config) {
  const CoordVector full = grid_coords(16, Transform{}, Axis::kRow);
  std::vector<double> even;
  for (std::size_t k = 0; k < full.values.size(); k += 2) even.push_back(full.values[k]);
  FeatureMap<float> big, small;
  if (config.mode == Mode::kBiline) {
    big = synthesize_styled(w, full.values, full.values, weights, config);
    small = synthesize_styled(w, even, even, weights, config);
  } else {
    auto field = [](std::span<const double> e) {
      CoordField f;
      f.height = f.width = static_cast<int>(e.size());
      for (double r : e) {
        for (double c : e) {
          f.rows.push_back(r);
          f.cols.push_back(c);
        }
      }
      return f;
    };
    big = synthesize_dense_styled(w, field(full.values), weights, config);
    small = synthesize_dense_styled(w, field(even), weights, config);
  }
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < small.height; ++i) {
      for (int j = 0; j < small.width; ++j) {
        worst = std::max(worst, static_cast<double>(std::abs(small.at(c, i, j) - big.at(c, 2 * i, 2 * j))));
      }
    }
  }
  return {"subset purity", worst <= 1e-5, format("max abs diff %.3g", worst)};
}

SelfTestCheck tiling_equality(std::uint64_t seed, const GeneratorWeights& weights, const GeneratorConfig& config) {
  RenderRequest request;
  request.seed = seed;
  request.height = request.width = 24;
  const Image8 whole = render(request, weights, config);
  request.tile_size = 7;
  const Image8 tiled = render_tiled(request, weights, config);
  return {"tiling equality", whole == tiled, whole == tiled ? "byte-identical" : "images differ"};
}

SelfTestCheck warp_vs_pixelwise(std::uint64_t seed, const GeneratorWeights& weights, const GeneratorConfig& config) {
  const Latent z = latent_from_seed(seed, config.latent_dim);
  const CoordField field = make_coord_field(Rotation{std::numbers::pi / 5}, 8, 8);
  const bool same = render_warped(z, field, weights, config) == render_pixelwise(z, field, weights, config);
  return {"warp vs pixelwise", same, same ? "byte-identical" : "images differ"};
}

}  // namespace

std::vector<SelfTestCheck> run_selftest(const GeneratorConfig& config, std::uint64_t seed) {
  config.validate();
  std::vector<SelfTestCheck> checks;
  checks.push_back(compose_check(seed));
  checks.push_back(gradient_check_case(seed));
  const GeneratorWeights weights = init_weights(config, seed);
  const StyleVector w = map_latent(latent_from_seed(seed, config.latent_dim), weights, config);
  checks.push_back(subset_purity(w, weights, config));
  checks.push_back(tiling_equality(seed, weights, config));
  checks.push_back(warp_vs_pixelwise(seed, weights, config));
  return checks;
}

}  // namespace creps
