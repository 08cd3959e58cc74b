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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "creps/error.hpp"
#include "creps/parallel.hpp"

namespace creps {

enum class Activation { kLinear, kLeakyRelu };

// LeakyReLU followed by the sqrt(2) gain that keeps the second moment of a
// unit-variance input roughly unchanged (StyleGAN2 bias_act convention).
template <typename T>
inline T leaky_relu(T x, T slope) {
  constexpr T kGain = static_cast<T>(std::numbers::sqrt2);
  return (x >= T{0} ? x : x * slope) * kGain;
}

// Non-owning view of an affine layer. `weight` is [out x in] drawn from
// N(0, 1); the equalized-learning-rate factor 1/sqrt(in) is applied at use.
template <typename T>
struct AffineView {
  int in = 0;
  int out = 0;
  std::span<const T> weight;
  std::span<const T> bias;

  T gain() const { return static_cast<T>(1.0 / std::sqrt(static_cast<double>(in))); }

  void validate() const {
    if (in < 1 || out < 1 || weight.size() != static_cast<std::size_t>(in) * out ||
        bias.size() != static_cast<std::size_t>(out)) {
      throw Error(ErrorCode::kShapeMismatch, "affine layer weights do not match [out x in]");
    }
  }
};

// A modulated pixel-wise layer: `style` maps w to one scale per input channel.
template <typename T>
struct ModulatedView {
  AffineView<T> style;
  AffineView<T> conv;
};

// Effective weight matrix [out x in] after equalized scaling (plain affine).
template <typename T>
std::vector<T> scaled_weights(const AffineView<T>& layer) {
  layer.validate();
  std::vector<T> out(layer.weight.begin(), layer.weight.end());
  const T g = layer.gain();
  for (auto& v : out) v *= g;
  return out;
}

// s = A w + b for one input vector, in ascending input order.
template <typename T>
std::vector<T> affine_vector(const AffineView<T>& layer, std::span<const T> x) {
  layer.validate();
  if (x.size() != static_cast<std::size_t>(layer.in)) {
    throw Error(ErrorCode::kShapeMismatch, "affine input length differs from layer fan-in");
  }
  const T g = layer.gain();
  std::vector<T> y(static_cast<std::size_t>(layer.out));
  for (int o = 0; o < layer.out; ++o) {
    T acc = T{0};
    for (int i = 0; i < layer.in; ++i) acc += (layer.weight[static_cast<std::size_t>(o) * layer.in + i] * g) * x[static_cast<std::size_t>(i)];
    y[static_cast<std::size_t>(o)] = acc + layer.bias[static_cast<std::size_t>(o)];
  }
  return y;
}

// Style-modulated and optionally demodulated weights [out x in]:
// w'_oi = s_i * W_oi / sqrt(fan_in), w''_oi = w'_oi / sqrt(sum_i w'^2_oi + eps).
template <typename T>
std::vector<T> modulate_weights(const ModulatedView<T>& layer, std::span<const T> style_vector, bool demodulate,
                                T epsilon) {
  layer.conv.validate();
  const std::vector<T> s = affine_vector(layer.style, style_vector);
  if (s.size() != static_cast<std::size_t>(layer.conv.in)) {
    throw Error(ErrorCode::kShapeMismatch, "style affine width differs from modulated layer fan-in");
  }
  const T g = layer.conv.gain();
  const int in = layer.conv.in;
  std::vector<T> w(layer.conv.weight.size());
  for (int o = 0; o < layer.conv.out; ++o) {
    T* row = w.data() + static_cast<std::size_t>(o) * in;
    T sumsq = T{0};
    for (int i = 0; i < in; ++i) {
      row[i] = (layer.conv.weight[static_cast<std::size_t>(o) * in + i] * g) * s[static_cast<std::size_t>(i)];
      sumsq += row[i] * row[i];
    }
    if (demodulate) {
      const T inv = T{1} / std::sqrt(sumsq + epsilon);
      for (int i = 0; i < in; ++i) row[i] *= inv;
    }
  }
  return w;
}

// y[o, t] = act(sum_i W[o, i] x[i, t] + bias[o]) for every location t, with x
// laid out [in x count] and y [out x count]. Each output element is a single
// ascending-i reduction regardless of how locations are partitioned.
template <typename T>
void apply_pixelwise(std::span<const T> weight, std::span<const T> bias, int in, int out, std::span<const T> x,
                     std::size_t count, std::span<T> y, Activation act, T slope) {
  if (weight.size() != static_cast<std::size_t>(in) * out || bias.size() != static_cast<std::size_t>(out) ||
      x.size() != static_cast<std::size_t>(in) * count || y.size() != static_cast<std::size_t>(out) * count) {
    throw Error(ErrorCode::kShapeMismatch, "pixel-wise layer buffers do not match [channels x locations]");
  }
  constexpr std::size_t kTile = 128;
  const std::size_t tiles = (count + kTile - 1) / kTile;
  const std::size_t grain = std::max<std::size_t>(1, 16384 / (static_cast<std::size_t>(in) * out + 1));
  parallel_for(tiles, grain, [&](std::size_t tile_begin, std::size_t tile_end) {
    T acc[kTile];
    for (std::size_t tile = tile_begin; tile < tile_end; ++tile) {
      const std::size_t t0 = tile * kTile;
      const std::size_t n = std::min(kTile, count - t0);
      for (int o = 0; o < out; ++o) {
        for (std::size_t t = 0; t < n; ++t) acc[t] = T{0};
        const T* wrow = weight.data() + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) {
          const T wi = wrow[i];
          const T* xi = x.data() + static_cast<std::size_t>(i) * count + t0;
          for (std::size_t t = 0; t < n; ++t) acc[t] += wi * xi[t];
        }
        const T b = bias[static_cast<std::size_t>(o)];
        T* yo = y.data() + static_cast<std::size_t>(o) * count + t0;
        if (act == Activation::kLeakyRelu) {
          for (std::size_t t = 0; t < n; ++t) yo[t] = leaky_relu(acc[t] + b, slope);
        } else {
          for (std::size_t t = 0; t < n; ++t) yo[t] = acc[t] + b;
        }
      }
    }
  });
}

// One modulated layer applied to a single C_in vector.
template <typename T>
std::vector<T> modulated_linear(const ModulatedView<T>& layer, std::span<const T> x, std::span<const T> style_vector,
                                bool demodulate, Activation act, T epsilon, T slope) {
  if (x.size() != static_cast<std::size_t>(layer.conv.in)) {
    throw Error(ErrorCode::kShapeMismatch, "modulated layer input length differs from fan-in");
  }
  const std::vector<T> w = modulate_weights(layer, style_vector, demodulate, epsilon);
  std::vector<T> y(static_cast<std::size_t>(layer.conv.out));
  apply_pixelwise<T>(w, layer.conv.bias, layer.conv.in, layer.conv.out, x, 1, y, act, slope);
  return y;
}

}  // namespace creps
