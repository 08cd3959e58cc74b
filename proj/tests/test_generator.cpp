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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "creps/generator.hpp"
#include "creps/persistence.hpp"
#include "creps/rng.hpp"
#include "oracles.hpp"

namespace creps {
namespace {

TEST(Generator, InitIsDeterministic) {
  const auto c = oracle::small_config();
  EXPECT_EQ(encode_container(to_entries(init_weights(c, 7))), encode_container(to_entries(init_weights(c, 7))));
  EXPECT_NE(encode_container(to_entries(init_weights(c, 0))), encode_container(to_entries(init_weights(c, 1))));
}

TEST(Generator, BiasesStartAtZero) {
  const auto w = init_weights(oracle::small_config(), 3);
  for (const auto& e : to_entries(w)) {
    if (e.name.ends_with(".bias")) {
      for (float v : e.data) EXPECT_EQ(v, 0.0f) << e.name;
    }
  }
}

TEST(Generator, ParameterCountSharedAcrossModes) {
  const auto b = init_weights(oracle::small_config(Mode::kBiline), 0);
  const auto d = init_weights(oracle::small_config(Mode::kDense), 0);
  EXPECT_EQ(b.parameter_count(), d.parameter_count());
  std::uint64_t from_entries_count = 0;
  for (const auto& e : to_entries(b)) from_entries_count += e.data.size();
  EXPECT_EQ(b.parameter_count(), from_entries_count);
}

TEST(Generator, ConfigValidationNamesField) {
  GeneratorConfig c;
  c.thickness = 0;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariant);
    EXPECT_NE(std::string(e.what()).find("thickness"), std::string::npos);
  }
  c = GeneratorConfig{};
  c.decoder_widths = {32, 64, 16};
  EXPECT_THROW(c.validate(), Error);
}

TEST(Generator, LatentScaleInvariance) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 1);
  Latent z = latent_from_seed(4, c.latent_dim);
  Latent z2 = z;
  for (auto& v : z2) v *= 2.0f;
  EXPECT_EQ(map_latent(z, w, c).w, map_latent(z2, w, c).w);
  const Latent zero(static_cast<std::size_t>(c.latent_dim), 0.0f);
  for (float v : map_latent(zero, w, c).w) EXPECT_TRUE(std::isfinite(v));
  const Latent wrong(3, 1.0f);
  EXPECT_THROW(map_latent(wrong, w, c), Error);
}

TEST(Generator, MappingMatchesScalarReference) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 2);
  const Latent z = latent_from_seed(5, c.latent_dim);
  std::vector<double> x(z.begin(), z.end());
  double ms = 0.0;
  for (double v : x) ms += v * v;
  ms /= static_cast<double>(x.size());
  for (double& v : x) v /= std::sqrt(ms + 1e-8);
  for (const AffineLayer& layer : w.mapping) {
    std::vector<double> y(static_cast<std::size_t>(layer.out));
    for (int o = 0; o < layer.out; ++o) {
      double acc = 0.0;
      for (int i = 0; i < layer.in; ++i) acc += layer.weight[static_cast<std::size_t>(o) * layer.in + i] * x[static_cast<std::size_t>(i)];
      acc = acc / std::sqrt(static_cast<double>(layer.in)) + layer.bias[static_cast<std::size_t>(o)];
      y[static_cast<std::size_t>(o)] = (acc >= 0 ? acc : 0.2 * acc) * std::sqrt(2.0);
    }
    x = y;
  }
  const auto got = map_latent(z, w, c).w;
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(got[k], x[k], 1e-4 * std::max(1.0, std::abs(x[k])));
}

TEST(Generator, BlockOfZerosIsZero) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 3);
  const StyleVector s = map_latent(latent_from_seed(0, c.latent_dim), w, c);
  BilineFeature<float> zero(c.fourier_channels, 5, 6, c.thickness);
  const auto out = synthesis_block(zero, s, w.blocks[0], c);
  for (float v : out.row_half) EXPECT_EQ(v, 0.0f);
  for (float v : out.col_half) EXPECT_EQ(v, 0.0f);
}

TEST(Generator, BlockMatchesPerLocationOracle) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 4);
  const StyleVector s = map_latent(latent_from_seed(1, c.latent_dim), w, c);
  Rng rng(9);
  FeatureMap<float> x{c.fourier_channels, 3, 5, rng.normal_vector<float>(static_cast<std::size_t>(c.fourier_channels) * 15)};
  const auto y = synthesis_block(x, s, w.blocks[0], c);
  const auto eps = static_cast<float>(c.demod_epsilon), slope = static_cast<float>(c.leaky_slope);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j) {
      std::vector<float> v(static_cast<std::size_t>(c.fourier_channels));
      for (int k = 0; k < c.fourier_channels; ++k) v[static_cast<std::size_t>(k)] = x.at(k, i, j);
      const auto h = modulated_linear<float>(w.blocks[0].first.view(), v, s.w, true, Activation::kLeakyRelu, eps, slope);
      const auto o = modulated_linear<float>(w.blocks[0].second.view(), h, s.w, true, Activation::kLeakyRelu, eps, slope);
      for (int k = 0; k < c.hidden_channels; ++k) EXPECT_EQ(y.at(k, i, j), o[static_cast<std::size_t>(k)]);
    }
}

TEST(Generator, BlockIsLocal) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 5);
  const StyleVector s = map_latent(latent_from_seed(2, c.latent_dim), w, c);
  Rng rng(10);
  auto b = oracle::random_biline<float>(rng, c.fourier_channels, 6, 6, c.thickness);
  const auto base = synthesis_block(b, s, w.blocks[0], c);
  b.row(3, 2, 1) += 1.0f;
  const auto moved = synthesis_block(b, s, w.blocks[0], c);
  EXPECT_EQ(base.col_half, moved.col_half);
  for (int k = 0; k < c.hidden_channels; ++k)
    for (int i = 0; i < 6; ++i)
      for (int d = 0; d < c.thickness; ++d) {
        if (i == 2 && d == 1) continue;
        EXPECT_EQ(base.row(k, i, d), moved.row(k, i, d));
      }
}

TEST(Generator, SynthesizeIsDeterministic) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 6);
  const Latent z = latent_from_seed(6, c.latent_dim);
  const auto e = grid_coords(16, Transform{}, Axis::kRow);
  const auto a = synthesize(z, e, e, w, c);
  const auto b = synthesize(z, e, e, w, c);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.channels, 3);
  EXPECT_EQ(a.height, 16);
}

TEST(Generator, SubsetPurity) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 7);
  const StyleVector s = map_latent(latent_from_seed(7, c.latent_dim), w, c);
  const auto e = grid_coords(32, Transform{}, Axis::kRow);
  std::vector<double> even;
  for (std::size_t k = 0; k < e.size(); k += 2) even.push_back(e.values[k]);
  const auto big = synthesize_styled(s, e.values, e.values, w, c);
  const auto small = synthesize_styled(s, even, even, w, c);
  for (int ch = 0; ch < 3; ++ch)
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) EXPECT_EQ(small.at(ch, i, j), big.at(ch, 2 * i, 2 * j));
}

TEST(Generator, RectangularOutputsAndCrop) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 8);
  const StyleVector s = map_latent(latent_from_seed(8, c.latent_dim), w, c);
  Transform zoom;
  zoom.scale = 2.0;
  const auto er = grid_coords(32, zoom, Axis::kRow);
  const auto ec = grid_coords(32, zoom, Axis::kColumn);
  const auto big = synthesize_styled(s, er.values, ec.values, w, c);
  Transform shifted;
  shifted.shift_row = 5.0 / 8.0 - 1.0;
  const auto sr = grid_coords(16, shifted, Axis::kRow);
  // Ten columns keep the 1/8 spacing at scale 10/16; column offset 11 then
  // needs shift 11/8 - 1.375 = 0.
  Transform narrow;
  narrow.scale = 10.0 / 16.0;
  const auto sc = grid_coords(10, narrow, Axis::kColumn);
  const auto crop = synthesize_styled(s, sr.values, sc.values, w, c);
  ASSERT_EQ(crop.width, 10);
  for (int ch = 0; ch < 3; ++ch)
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 10; ++j) EXPECT_NEAR(crop.at(ch, i, j), big.at(ch, i + 5, j + 11), 1e-5);
}

TEST(Generator, TraceAndMeter) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 9);
  const StyleVector s = map_latent(latent_from_seed(9, c.latent_dim), w, c);
  const auto e = grid_coords(8, Transform{}, Axis::kRow);
  FeatureTrace trace;
  ActivationMeter meter;
  SynthesisOptions options;
  options.trace = &trace;
  options.meter = &meter;
  const auto img = synthesize_styled(s, e.values, e.values, w, c, options);
  EXPECT_EQ(trace.composed.size(), static_cast<std::size_t>(c.num_blocks));
  EXPECT_EQ(trace.fused.size(), static_cast<std::size_t>(c.num_blocks));
  EXPECT_EQ(trace.composed[0].data, trace.fused[0].data);
  EXPECT_GT(meter.peak(), 0u);
  EXPECT_EQ(meter.live(), 0u);
  EXPECT_EQ(synthesize_styled(s, e.values, e.values, w, c).data, img.data);
}

TEST(Generator, DenseModeIsPixelLocal) {
  const auto c = oracle::small_config(Mode::kDense);
  const auto w = init_weights(c, 10);
  const Latent z = latent_from_seed(10, c.latent_dim);
  CoordField f = default_field(6, 5);
  const auto base = synthesize_dense(z, f, w, c);
  f.rows[2 * 5 + 3] += 0.3;
  const auto moved = synthesize_dense(z, f, w, c);
  int changed = 0;
  for (int ch = 0; ch < 3; ++ch)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 5; ++j) {
        if (i == 2 && j == 3) {
          changed += base.at(ch, i, j) != moved.at(ch, i, j);
        } else {
          EXPECT_EQ(base.at(ch, i, j), moved.at(ch, i, j));
        }
      }
  EXPECT_GT(changed, 0);
}

TEST(Generator, DenseFourierInputSplitsChannels) {
  Rng rng(11);
  const FourierParams p = init_fourier(5, 3, 8.0, rng);
  const CoordField f = make_coord_field(Rotation{0.4}, 2, 3);
  const auto x = dense_fourier_input(f, p, 5);
  const std::size_t pixels = 6;
  for (std::size_t t = 0; t < pixels; ++t) {
    for (int k = 0; k < 5; ++k) {
      const bool row = k < 3;
      const FourierAxis& axis = row ? p.row : p.column;
      const double e = row ? f.rows[t] : f.cols[t];
      const std::size_t slot = static_cast<std::size_t>(row ? k : k - 3) * 3;
      const double ref = std::sin(2.0 * std::numbers::pi * (axis.frequencies[slot] * e + axis.phases[slot]));
      EXPECT_NEAR(x[static_cast<std::size_t>(k) * pixels + t], ref, 1e-6);
    }
  }
}

TEST(Generator, EmptyCoordinatesRejected) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 11);
  const StyleVector s = map_latent(latent_from_seed(0, c.latent_dim), w, c);
  const std::vector<double> empty, one{0.0};
  EXPECT_THROW(synthesize_styled(s, empty, one, w, c), Error);
  auto dense = c;
  dense.mode = Mode::kDense;
  EXPECT_THROW(synthesize(latent_from_seed(0, c.latent_dim), grid_coords(2, Transform{}, Axis::kRow),
                          grid_coords(2, Transform{}, Axis::kColumn), w, dense),
               Error);
}

TEST(Generator, EntriesRoundTrip) {
  const auto c = oracle::small_config();
  const auto w = init_weights(c, 12);
  auto entries = to_entries(w);
  const auto back = from_entries(entries, c);
  EXPECT_EQ(encode_container(to_entries(back)), encode_container(entries));
  auto other = c;
  other.hidden_channels += 1;
  EXPECT_THROW(from_entries(entries, other), Error);
  entries.pop_back();
  EXPECT_THROW(from_entries(entries, c), Error);
}

TEST(Generator, ModeNames) {
  EXPECT_EQ(parse_mode("dense"), Mode::kDense);
  EXPECT_EQ(to_string(Mode::kBiline), "biline");
  EXPECT_THROW(parse_mode("sparse"), Error);
}

TEST(Generator, HalfGain) {
  EXPECT_FLOAT_EQ(projection_half_gain(4), 0.5f);
  EXPECT_THROW(projection_half_gain(0), Error);
}

}  // namespace
}  // namespace creps
