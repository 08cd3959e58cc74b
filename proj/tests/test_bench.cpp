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

#include <gtest/gtest.h>

#include <json.hpp>

#include "creps/bench.hpp"
#include "oracles.hpp"

namespace creps {
namespace {

TEST(Bench, TrunkRatioClosedForm) {
  const GeneratorConfig c;
  for (int h : {32, 64, 256, 512}) {
    const auto b = count_activations(c, Mode::kBiline, h, h);
    const auto d = count_activations(c, Mode::kDense, h, h);
    EXPECT_EQ(d.trunk * 2 * static_cast<std::uint64_t>(c.thickness), b.trunk * static_cast<std::uint64_t>(h));
  }
  EXPECT_EQ(count_activations(c, Mode::kDense, 256, 256).trunk, 16 * count_activations(c, Mode::kBiline, 256, 256).trunk);
}

TEST(Bench, TrunkScaling) {
  const GeneratorConfig c;
  EXPECT_EQ(count_activations(c, Mode::kBiline, 512, 512).trunk, 2 * count_activations(c, Mode::kBiline, 256, 256).trunk);
  EXPECT_EQ(count_activations(c, Mode::kDense, 512, 512).trunk, 4 * count_activations(c, Mode::kDense, 256, 256).trunk);
  const std::uint64_t per = static_cast<std::uint64_t>(c.fourier_channels) +
                            static_cast<std::uint64_t>(c.num_blocks) * (2 * c.hidden_channels + c.residual_channels);
  EXPECT_EQ(count_activations(c, Mode::kBiline, 100, 60).trunk, per * (100 + 60) * c.thickness);
}

TEST(Bench, BilineTrunkSmallerAboveTwoD) {
  const GeneratorConfig c;
  for (int h = 2 * c.thickness + 1; h <= 80; h += 7) {
    EXPECT_LT(count_activations(c, Mode::kBiline, h, h).trunk, count_activations(c, Mode::kDense, h, h).trunk);
  }
}

TEST(Bench, DenseTrunkAtLeastFourTimesBilineAt256) {
  const GeneratorConfig c;
  EXPECT_GE(count_activations(c, Mode::kDense, 256, 256).trunk, 4 * count_activations(c, Mode::kBiline, 256, 256).trunk);
  // Shared dense refinement dominates both full-pipeline peaks.
  EXPECT_GT(count_activations(c, Mode::kDense, 256, 256).peak, count_activations(c, Mode::kBiline, 256, 256).peak);
}

TEST(Bench, AnalyticPeakMatchesInstrumentation) {
  for (Mode mode : {Mode::kBiline, Mode::kDense}) {
    const auto c = oracle::small_config(mode);
    const auto w = init_weights(c, 0);
    const StyleVector s = map_latent(latent_from_seed(0, c.latent_dim), w, c);
    for (auto [h, wd] : {std::pair{8, 8}, std::pair{13, 21}, std::pair{40, 40}}) {
      ActivationMeter meter;
      SynthesisOptions opt;
      opt.meter = &meter;
      if (mode == Mode::kBiline) {
        const auto er = grid_coords(h, Transform{}, Axis::kRow);
        const auto ec = grid_coords(wd, Transform{}, Axis::kColumn);
        synthesize_styled(s, er.values, ec.values, w, c, opt);
      } else {
        synthesize_dense_styled(s, default_field(h, wd), w, c, opt);
      }
      const auto count = count_activations(c, mode, h, wd);
      EXPECT_EQ(meter.peak(), count.peak) << to_string(mode) << " " << h << "x" << wd;
      EXPECT_EQ(meter.total(), count.total);
    }
  }
}

TEST(Bench, ReportRowsAndJson) {
  const auto c = oracle::small_config();
  BenchOptions o;
  o.resolutions = {8, 16};
  o.batches = {1, 2};
  o.repeats = 3;
  const BenchReport r = run_bench(c, o);
  ASSERT_EQ(r.rows.size(), 8u);
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.out_of_memory);
    EXPECT_GT(row.time_s_median, 0.0);
    EXPECT_GT(row.activation_elements, 0u);
    EXPECT_EQ(row.parameter_count, r.rows[0].parameter_count);
  }
  const auto j = nlohmann::json::parse(report_to_json(r));
  ASSERT_TRUE(j.is_array());
  for (const char* key : {"mode", "H", "W", "batch", "params", "activation_elements", "bytes_est", "time_s_median", "repeats"}) {
    EXPECT_TRUE(j[0].contains(key)) << key;
  }
  EXPECT_NE(format_report(r).find("biline"), std::string::npos);
}

TEST(Bench, OverBudgetRowsAreOom) {
  const auto c = oracle::small_config();
  BenchOptions o;
  o.resolutions = {8, 64};
  o.modes = {Mode::kDense};
  o.memory_budget_bytes = count_activations(c, Mode::kDense, 8, 8).peak * 4;
  const BenchReport r = run_bench(c, o);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_FALSE(r.rows[0].out_of_memory);
  EXPECT_TRUE(r.rows[1].out_of_memory);
  EXPECT_NE(format_report(r).find("OOM"), std::string::npos);
  EXPECT_TRUE(nlohmann::json::parse(report_to_json(r))[1]["oom"].get<bool>());
}

TEST(Bench, NeedsThreeRepeats) {
  BenchOptions o;
  o.repeats = 2;
  EXPECT_THROW(run_bench(oracle::small_config(), o), Error);
}

}  // namespace
}  // namespace creps
