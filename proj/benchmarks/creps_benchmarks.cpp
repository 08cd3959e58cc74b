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

#include <benchmark/benchmark.h>

#include <vector>

#include "creps/biline.hpp"
#include "creps/coords.hpp"
#include "creps/fitter.hpp"
#include "creps/generator.hpp"
#include "creps/rng.hpp"

namespace {

using namespace creps;

void BM_Compose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  Rng rng(0);
  BilineFeature<float> b(32, n, n, d);
  b.row_half = rng.normal_vector<float>(b.row_half.size());
  b.col_half = rng.normal_vector<float>(b.col_half.size());
  for (auto _ : state) benchmark::DoNotOptimize(compose(b));
  state.SetItemsProcessed(state.iterations() * 32 * n * n);
}
BENCHMARK(BM_Compose)->Args({64, 8})->Args({256, 8})->Args({256, 32});

void BM_LossGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = 8;
  Rng rng(1);
  const auto image = rng.uniform_vector<double>(static_cast<std::size_t>(n) * n);
  const auto row = rng.normal_vector<double>(static_cast<std::size_t>(n) * d);
  const auto col = rng.normal_vector<double>(static_cast<std::size_t>(n) * d);
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_gradient(image, n, n, d, row, col));
}
BENCHMARK(BM_LossGradient)->Arg(64)->Arg(128);

struct Fixture {
  GeneratorConfig config;
  GeneratorWeights weights;
  StyleVector w;
  Fixture() : weights(init_weights(config, 0)), w(map_latent(latent_from_seed(0, config.latent_dim), weights, config)) {}
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_SynthesizeBiline(benchmark::State& state) {
  const Fixture& f = fixture();
  const int n = static_cast<int>(state.range(0));
  const auto e = grid_coords(n, Transform{}, Axis::kRow);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_styled(f.w, e.values, e.values, f.weights, f.config));
}
BENCHMARK(BM_SynthesizeBiline)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SynthesizeDense(benchmark::State& state) {
  const Fixture& f = fixture();
  const int n = static_cast<int>(state.range(0));
  const CoordField field = default_field(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_dense_styled(f.w, field, f.weights, f.config));
}
BENCHMARK(BM_SynthesizeDense)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
