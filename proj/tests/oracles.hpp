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

// Slow, obviously-correct references used by the unit and acceptance tests.

#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "creps/biline.hpp"
#include "creps/generator.hpp"
#include "creps/layers.hpp"
#include "creps/rng.hpp"

namespace creps::oracle {

template <typename T>
BilineFeature<T> random_biline(Rng& rng, int c, int h, int w, int d) {
  BilineFeature<T> b(c, h, w, d);
  b.row_half = rng.normal_vector<T>(b.row_half.size());
  b.col_half = rng.normal_vector<T>(b.col_half.size());
  return b;
}

// Quadruple loop over (c, i, j, d).
inline std::vector<double> compose(const BilineFeature<double>& b) {
  std::vector<double> out(static_cast<std::size_t>(b.channels) * b.height * b.width, 0.0);
  for (int c = 0; c < b.channels; ++c)
    for (int i = 0; i < b.height; ++i)
      for (int j = 0; j < b.width; ++j)
        for (int d = 0; d < b.thickness; ++d)
          out[(static_cast<std::size_t>(c) * b.height + i) * b.width + j] += b.row(c, i, d) * b.col(c, j, d);
  return out;
}

// Direct transcription of the modulation formula on one vector.
inline std::vector<double> modulated_linear(int in, int out, const std::vector<double>& style_w,
                                            const std::vector<double>& style_b, const std::vector<double>& conv_w,
                                            const std::vector<double>& conv_b, const std::vector<double>& wvec,
                                            const std::vector<double>& x, bool demod, bool lrelu, double eps,
                                            double slope) {
  const int style_dim = static_cast<int>(wvec.size());
  std::vector<double> s(static_cast<std::size_t>(in));
  for (int i = 0; i < in; ++i) {
    double acc = 0.0;
    for (int k = 0; k < style_dim; ++k) acc += style_w[static_cast<std::size_t>(i) * style_dim + k] * wvec[static_cast<std::size_t>(k)];
    s[static_cast<std::size_t>(i)] = acc / std::sqrt(static_cast<double>(style_dim)) + style_b[static_cast<std::size_t>(i)];
  }
  std::vector<double> y(static_cast<std::size_t>(out));
  for (int o = 0; o < out; ++o) {
    double norm = 0.0;
    std::vector<double> wp(static_cast<std::size_t>(in));
    for (int i = 0; i < in; ++i) {
      wp[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] * conv_w[static_cast<std::size_t>(o) * in + i] / std::sqrt(static_cast<double>(in));
      norm += wp[static_cast<std::size_t>(i)] * wp[static_cast<std::size_t>(i)];
    }
    double acc = 0.0;
    for (int i = 0; i < in; ++i) {
      const double wi = demod ? wp[static_cast<std::size_t>(i)] / std::sqrt(norm + eps) : wp[static_cast<std::size_t>(i)];
      acc += wi * x[static_cast<std::size_t>(i)];
    }
    acc += conv_b[static_cast<std::size_t>(o)];
    if (lrelu) acc = (acc >= 0 ? acc : slope * acc) * std::sqrt(2.0);
    y[static_cast<std::size_t>(o)] = acc;
  }
  return y;
}

// Singular values of A [m x n] from the eigenvalues of A^T A, by power
// iteration with deflation. Only good for well-separated spectra.
inline std::vector<double> singular_values_power(std::span<const double> a, int m, int n, int count) {
  std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < m; ++k) g[static_cast<std::size_t>(p) * n + q] += a[static_cast<std::size_t>(k) * n + p] * a[static_cast<std::size_t>(k) * n + q];
  std::vector<double> sigma;
  Rng rng(99);
  for (int e = 0; e < count; ++e) {
    std::vector<double> v = rng.normal_vector<double>(static_cast<std::size_t>(n));
    double lambda = 0.0;
    for (int it = 0; it < 5000; ++it) {
      std::vector<double> gv(static_cast<std::size_t>(n), 0.0);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) gv[static_cast<std::size_t>(p)] += g[static_cast<std::size_t>(p) * n + q] * v[static_cast<std::size_t>(q)];
      double norm = 0.0;
      for (double x : gv) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) break;
      for (int p = 0; p < n; ++p) v[static_cast<std::size_t>(p)] = gv[static_cast<std::size_t>(p)] / norm;
      lambda = norm;
    }
    sigma.push_back(std::sqrt(std::max(lambda, 0.0)));
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) g[static_cast<std::size_t>(p) * n + q] -= lambda * v[static_cast<std::size_t>(p)] * v[static_cast<std::size_t>(q)];
  }
  return sigma;
}

// A narrow generator that keeps unit tests fast.
inline GeneratorConfig small_config(Mode mode = Mode::kBiline) {
  GeneratorConfig c;
  c.latent_dim = 16;
  c.style_dim = 16;
  c.num_blocks = 3;
  c.hidden_channels = 24;
  c.residual_channels = 8;
  c.thickness = 4;
  c.fourier_channels = 12;
  c.decoder_widths = {8, 16, 32, 16, 8};
  c.refinement_widths = {8, 32, 16};
  c.mode = mode;
  return c;
}

inline std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("creps_tests_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace creps::oracle
