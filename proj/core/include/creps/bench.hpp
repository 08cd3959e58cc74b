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
#include <string>
#include <vector>

#include "creps/generator.hpp"

namespace creps {

// Element counts of the activation buffers one synthesis call allocates.
//  trunk: Fourier input, both block layers and the residual projection of
//         every block, i.e. (C_f + N (2 C_h + R)) x locations, where a
//         location is (position, thickness slot) in bi-line mode and a pixel
//         in dense mode.
//  peak:  high-water mark of live elements under the pipeline's buffer
//         schedule (what an instrumented run measures).
//  total: sum of every buffer ever allocated.
struct ActivationCount {
  std::uint64_t trunk = 0;
  std::uint64_t peak = 0;
  std::uint64_t total = 0;
};

ActivationCount count_activations(const GeneratorConfig& config, Mode mode, int height, int width);

struct BenchRow {
  Mode mode = Mode::kBiline;
  int height = 0;
  int width = 0;
  int batch = 1;
  std::uint64_t parameter_count = 0;
  std::uint64_t activation_elements = 0;  // peak x batch
  std::uint64_t bytes_estimate = 0;       // activation_elements x sizeof(float)
  double time_s_median = 0.0;
  double throughput = 0.0;  // pixels / second
  int repeats = 0;
  bool out_of_memory = false;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  int threads = 1;
};

struct BenchOptions {
  std::vector<int> resolutions{256, 512};
  std::vector<int> batches{1};
  std::vector<Mode> modes{Mode::kBiline, Mode::kDense};
  int repeats = 3;
  std::uint64_t memory_budget_bytes = 4ull << 30;
  std::uint64_t seed = 0;
};

// Times synthesis (median of `repeats` after one warm-up) for every
// mode x resolution x batch; rows whose estimate exceeds the budget are
// reported as OOM without running.
BenchReport run_bench(const GeneratorConfig& config, const BenchOptions& options);

std::string format_report(const BenchReport& report);
// Array of {mode, H, W, batch, params, activation_elements, bytes_est,
// time_s_median, repeats} objects, plus "oom" and "throughput".
std::string report_to_json(const BenchReport& report);

}  // namespace creps
