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

#include <cmath>

#include "creps/layers.hpp"
#include "creps/rng.hpp"
#include "oracles.hpp"

namespace creps {
namespace {

struct Layer64 {
  std::vector<double> style_w, style_b, conv_w, conv_b;
  int style_dim, in, out;

  ModulatedView<double> view() const {
    return {{style_dim, in, style_w, style_b}, {in, out, conv_w, conv_b}};
  }
};

Layer64 random_layer(Rng& rng, int style_dim, int in, int out) {
  Layer64 l{rng.normal_vector<double>(static_cast<std::size_t>(style_dim) * in), rng.normal_vector<double>(static_cast<std::size_t>(in)),
            rng.normal_vector<double>(static_cast<std::size_t>(in) * out), rng.normal_vector<double>(static_cast<std::size_t>(out)),
            style_dim, in, out};
  return l;
}

TEST(Layers, NearIdentity) {
  const Layer64 l{{1.0}, {0.0}, {1.0}, {0.0}, 1, 1, 1};
  const std::vector<double> w{1.0};
  for (double x : {-3.0, 0.5, 2.0}) {
    const std::vector<double> xv{x};
    const auto y = modulated_linear<double>(l.view(), xv, w, true, Activation::kLinear, 1e-8, 0.2);
    EXPECT_DOUBLE_EQ(y[0], x / std::sqrt(1.0 + 1e-8));
  }
}

TEST(Layers, ZeroStyleLeavesBias) {
  Rng rng(1);
  Layer64 l = random_layer(rng, 3, 4, 2);
  std::fill(l.style_w.begin(), l.style_w.end(), 0.0);
  std::fill(l.style_b.begin(), l.style_b.end(), 0.0);
  const auto x = rng.normal_vector<double>(4);
  const auto w = rng.normal_vector<double>(3);
  for (bool demod : {false, true}) {
    const auto y = modulated_linear<double>(l.view(), x, w, demod, Activation::kLinear, 1e-8, 0.2);
    EXPECT_EQ(y[0], l.conv_b[0]);
    EXPECT_EQ(y[1], l.conv_b[1]);
  }
}

TEST(Layers, MatchesScalarFormula) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Layer64 l = random_layer(rng, 5, 4, 3);
    const auto x = rng.normal_vector<double>(4);
    const auto w = rng.normal_vector<double>(5);
    for (bool demod : {false, true}) {
      for (bool act : {false, true}) {
        const auto y = modulated_linear<double>(l.view(), x, w, demod, act ? Activation::kLeakyRelu : Activation::kLinear, 1e-8, 0.2);
        const auto ref = oracle::modulated_linear(4, 3, l.style_w, l.style_b, l.conv_w, l.conv_b, w, x, demod, act, 1e-8, 0.2);
        for (int o = 0; o < 3; ++o) EXPECT_NEAR(y[static_cast<std::size_t>(o)], ref[static_cast<std::size_t>(o)], 1e-12);
      }
    }
  }
}

TEST(Layers, DemodulatedRowsHaveUnitNorm) {
  Rng rng(3);
  const Layer64 l = random_layer(rng, 8, 16, 6);
  const auto w = rng.normal_vector<double>(8);
  const auto m = modulate_weights<double>(l.view(), w, true, 1e-8);
  for (int o = 0; o < 6; ++o) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += m[static_cast<std::size_t>(o) * 16 + i] * m[static_cast<std::size_t>(o) * 16 + i];
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
}

TEST(Layers, FanInScalingGivesUnitVariance) {
  // Output of an N(0, 1) layer on an all-ones input, over many weight draws.
  Rng rng(4);
  const int in = 64;
  const std::vector<double> ones(in, 1.0), zero{0.0};
  double sum = 0.0, sumsq = 0.0;
  const int samples = 10000;
  for (int n = 0; n < samples; ++n) {
    const auto weight = rng.normal_vector<double>(in);
    const auto y = affine_vector<double>({in, 1, weight, zero}, ones);
    sum += y[0];
    sumsq += y[0] * y[0];
  }
  const double var = sumsq / samples - (sum / samples) * (sum / samples);
  EXPECT_NEAR(var, 1.0, 0.2);
}

TEST(Layers, LeakyReluWithGain) {
  EXPECT_DOUBLE_EQ(leaky_relu(2.0, 0.2), 2.0 * std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(leaky_relu(-1.0, 0.2), -0.2 * std::sqrt(2.0));
  EXPECT_EQ(leaky_relu(0.0, 0.2), 0.0);
}

TEST(Layers, PixelwiseEqualsPerLocation) {
  Rng rng(5);
  const int in = 7, out = 5;
  const std::size_t count = 300;  // spans several location tiles
  const auto weight = rng.normal_vector<float>(static_cast<std::size_t>(in) * out);
  const auto bias = rng.normal_vector<float>(static_cast<std::size_t>(out));
  const auto x = rng.normal_vector<float>(static_cast<std::size_t>(in) * count);
  std::vector<float> y(static_cast<std::size_t>(out) * count);
  apply_pixelwise<float>(weight, bias, in, out, x, count, y, Activation::kLeakyRelu, 0.2f);
  for (std::size_t t = 0; t < count; t += 37) {
    std::vector<float> xt(static_cast<std::size_t>(in)), yt(static_cast<std::size_t>(out));
    for (int i = 0; i < in; ++i) xt[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i) * count + t];
    apply_pixelwise<float>(weight, bias, in, out, xt, 1, yt, Activation::kLeakyRelu, 0.2f);
    for (int o = 0; o < out; ++o) EXPECT_EQ(yt[static_cast<std::size_t>(o)], y[static_cast<std::size_t>(o) * count + t]);
  }
}

TEST(Layers, ShapeErrors) {
  Rng rng(6);
  const Layer64 l = random_layer(rng, 3, 4, 2);
  const auto w = rng.normal_vector<double>(3);
  const std::vector<double> short_x(3, 0.0);
  EXPECT_THROW(modulated_linear<double>(l.view(), short_x, w, true, Activation::kLinear, 1e-8, 0.2), Error);
  const std::vector<double> x(4, 0.0), short_w(2, 0.0);
  EXPECT_THROW(modulated_linear<double>(l.view(), x, short_w, true, Activation::kLinear, 1e-8, 0.2), Error);
}

}  // namespace
}  // namespace creps
