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
#include <span>
#include <vector>

#include "creps/biline.hpp"

namespace creps {

enum class Optimizer { kGradientDescent, kAdam };

struct FitConfig {
  int thickness = 8;
  int iterations = 5000;
  double learning_rate = 1e-2;
  Optimizer optimizer = Optimizer::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  // Embedding entries start at N(0, init_scale^2 / sqrt(D)) so that the
  // initial composition has unit-order variance.
  double init_scale = 1.0;

  void validate() const;
};

struct FitResult {
  BilineFeature<double> embeddings;  // one bi-line channel per image channel
  std::vector<double> mse_trace;     // channel-averaged MSE before each update
  double final_mse = 0.0;            // channel-averaged MSE after the last update
  double compression_ratio = 0.0;    // D (H + W) / (H W)
};

// Fits every channel of `image` ([C x H x W], values in [0, 1])
// independently by minimizing mean((F - I)^2) over the row and column
// embeddings. Channels may run concurrently; results do not depend on it.
FitResult fit_biline(const FeatureMap<double>& image, const FitConfig& config);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_row;  // [H x D]
  std::vector<double> grad_col;  // [W x D]
};

// L = mean_ij (sum_d row[i, d] col[j, d] - I[i, j])^2 and its analytic
// gradient for one channel. `channel` is row-major [H x W].
LossGradient loss_and_gradient(std::span<const double> channel, int height, int width, int thickness,
                               std::span<const double> row, std::span<const double> col);
double channel_mse(std::span<const double> channel, int height, int width, int thickness,
                   std::span<const double> row, std::span<const double> col);

// Singular values of a row-major [rows x cols] matrix in descending order,
// by one-sided (Hestenes) Jacobi rotations.
std::vector<double> singular_values(std::span<const double> matrix, int rows, int cols);

// Global optimum of the per-channel fitting objective at thickness D:
// sum_{k > D} sigma_k^2 / (H W).
double svd_oracle_mse(std::span<const double> channel, int height, int width, int thickness);

// Max over all parameters of |g_a - g_fd| / max(1, |g_a|, |g_fd|) with
// central differences of the given step.
double gradient_check(std::span<const double> channel, int height, int width, int thickness,
                      std::span<const double> row, std::span<const double> col, double step = 1e-5);
// Same at a N(0, 1) parameter point drawn from `seed`.
double gradient_check(std::span<const double> channel, int height, int width, int thickness, std::uint64_t seed);

}  // namespace creps
