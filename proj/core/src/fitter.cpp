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

#include "creps/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "creps/error.hpp"
#include "creps/parallel.hpp"
#include "creps/rng.hpp"

namespace creps {
namespace {

constexpr std::uint64_t kFitStreamBase = 100;

void check_channel(std::span<const double> channel, int height, int width, int thickness,
                   std::span<const double> row, std::span<const double> col) {
  if (height < 1 || width < 1 || thickness < 1) {
    throw Error(ErrorCode::kInvalidArgument, "channel dimensions and thickness must be positive");
  }
  if (channel.size() != static_cast<std::size_t>(height) * width ||
      row.size() != static_cast<std::size_t>(height) * thickness ||
      col.size() != static_cast<std::size_t>(width) * thickness) {
    throw Error(ErrorCode::kShapeMismatch, "channel or embedding sizes do not match [H x W], [H x D], [W x D]");
  }
}

double residual_into(std::span<const double> channel, int height, int width, int thickness,
                     std::span<const double> row, std::span<const double> col, std::vector<double>& residual) {
  residual.resize(channel.size());
  double sumsq = 0.0;
  for (int i = 0; i < height; ++i) {
    const double* r = row.data() + static_cast<std::size_t>(i) * thickness;
    for (int j = 0; j < width; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * width + j;
      const double f = detail::dot_thickness(r, col.data() + static_cast<std::size_t>(j) * thickness, thickness);
      residual[idx] = f - channel[idx];
      sumsq += residual[idx] * residual[idx];
    }
  }
  return sumsq / static_cast<double>(channel.size());
}

struct ChannelFit {
  std::vector<double> row, col, trace;
  double final_mse = 0.0;
};

ChannelFit fit_channel(std::span<const double> channel, int height, int width, const FitConfig& config,
                       std::uint64_t seed, int channel_index) {
  const int d = config.thickness;
  Rng rng(seed);
  const double stddev = config.init_scale * std::pow(static_cast<double>(d), -0.25);
  ChannelFit fit;
  fit.row = rng.normal_vector<double>(static_cast<std::size_t>(height) * d, stddev);
  fit.col = rng.normal_vector<double>(static_cast<std::size_t>(width) * d, stddev);
  fit.trace.reserve(static_cast<std::size_t>(config.iterations));

  std::vector<double> m_row(fit.row.size()), v_row(fit.row.size()), m_col(fit.col.size()), v_col(fit.col.size());
  double beta1_t = 1.0, beta2_t = 1.0;
  auto step = [&](std::vector<double>& theta, const std::vector<double>& g, std::vector<double>& m,
                  std::vector<double>& v) {
    if (config.optimizer == Optimizer::kGradientDescent) {
      for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= config.learning_rate * g[k];
      return;
    }
    for (std::size_t k = 0; k < theta.size(); ++k) {
      m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * g[k];
      v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * g[k] * g[k];
      const double m_hat = m[k] / (1.0 - beta1_t);
      const double v_hat = v[k] / (1.0 - beta2_t);
      theta[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  };

  for (int it = 0; it < config.iterations; ++it) {
    LossGradient lg = loss_and_gradient(channel, height, width, d, fit.row, fit.col);
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorCode::kNumeric, "fit diverged: non-finite MSE on channel " + std::to_string(channel_index) +
                                           " at iteration " + std::to_string(it) + " (try a smaller learning rate)");
    }
    fit.trace.push_back(lg.loss);
    beta1_t *= config.beta1;
    beta2_t *= config.beta2;
    step(fit.row, lg.grad_row, m_row, v_row);
    step(fit.col, lg.grad_col, m_col, v_col);
  }
  fit.final_mse = channel_mse(channel, height, width, d, fit.row, fit.col);
  if (!std::isfinite(fit.final_mse)) {
    throw Error(ErrorCode::kNumeric, "fit diverged: non-finite final MSE on channel " + std::to_string(channel_index));
  }
  return fit;
}

}  // namespace

void FitConfig::validate() const {
  if (thickness < 1) throw Error(ErrorCode::kInvalidArgument, "fit thickness must be at least 1");
  if (iterations < 1) throw Error(ErrorCode::kInvalidArgument, "fit iterations must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) throw Error(ErrorCode::kInvalidArgument, "init scale must be positive");
}

LossGradient loss_and_gradient(std::span<const double> channel, int height, int width, int thickness,
                               std::span<const double> row, std::span<const double> col) {
  check_channel(channel, height, width, thickness, row, col);
  std::vector<double> residual;
  LossGradient out;
  out.loss = residual_into(channel, height, width, thickness, row, col, residual);
  out.grad_row.assign(row.size(), 0.0);
  out.grad_col.assign(col.size(), 0.0);
  const double scale = 2.0 / static_cast<double>(channel.size());
  for (int i = 0; i < height; ++i) {
    double* gr = out.grad_row.data() + static_cast<std::size_t>(i) * thickness;
    const double* r = row.data() + static_cast<std::size_t>(i) * thickness;
    for (int j = 0; j < width; ++j) {
      const double e = scale * residual[static_cast<std::size_t>(i) * width + j];
      double* gc = out.grad_col.data() + static_cast<std::size_t>(j) * thickness;
      const double* c = col.data() + static_cast<std::size_t>(j) * thickness;
      for (int d = 0; d < thickness; ++d) {
        gr[d] += e * c[d];
        gc[d] += e * r[d];
      }
    }
  }
  return out;
}

double channel_mse(std::span<const double> channel, int height, int width, int thickness,
                   std::span<const double> row, std::span<const double> col) {
  check_channel(channel, height, width, thickness, row, col);
  std::vector<double> residual;
  return residual_into(channel, height, width, thickness, row, col, residual);
}

FitResult fit_biline(const FeatureMap<double>& image, const FitConfig& config) {
  config.validate();
  if (image.channels < 1 || image.height < 1 || image.width < 1 ||
      image.data.size() != static_cast<std::size_t>(image.channels) * image.pixels()) {
    throw Error(ErrorCode::kInvalidArgument, "fit needs a non-empty [C x H x W] image");
  }
  for (double v : image.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNumeric, "image contains non-finite values");
  }
  const int channels = image.channels;
  const std::size_t plane = image.pixels();
  std::vector<ChannelFit> fits(static_cast<std::size_t>(channels));
  parallel_for(static_cast<std::size_t>(channels), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const std::span<const double> channel(image.data.data() + c * plane, plane);
      fits[c] = fit_channel(channel, image.height, image.width, config, derive_seed(config.seed, kFitStreamBase + c),
                            static_cast<int>(c));
    }
  });

  FitResult result;
  result.embeddings = BilineFeature<double>(channels, image.height, image.width, config.thickness);
  result.mse_trace.assign(static_cast<std::size_t>(config.iterations), 0.0);
  for (std::size_t c = 0; c < fits.size(); ++c) {
    std::copy(fits[c].row.begin(), fits[c].row.end(), result.embeddings.row_half.begin() + static_cast<std::ptrdiff_t>(c * fits[c].row.size()));
    std::copy(fits[c].col.begin(), fits[c].col.end(), result.embeddings.col_half.begin() + static_cast<std::ptrdiff_t>(c * fits[c].col.size()));
    for (std::size_t t = 0; t < result.mse_trace.size(); ++t) result.mse_trace[t] += fits[c].trace[t] / channels;
    result.final_mse += fits[c].final_mse / channels;
  }
  result.compression_ratio = storage_ratio(config.thickness, image.height, image.width);
  return result;
}

std::vector<double> singular_values(std::span<const double> matrix, int rows, int cols) {
  if (rows < 1 || cols < 1 || matrix.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::kShapeMismatch, "singular_values needs a non-empty [rows x cols] matrix");
  }
  // Work on the columns of A (or of A^T when it is wide) so that n <= m.
  const bool transpose = cols > rows;
  const int m = transpose ? cols : rows;
  const int n = transpose ? rows : cols;
  std::vector<std::vector<double>> columns(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = matrix[static_cast<std::size_t>(i) * cols + j];
      if (transpose) {
        columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      } else {
        columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
      }
    }
  }

  constexpr int kMaxSweeps = 80;
  constexpr double kTolerance = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        auto& a = columns[static_cast<std::size_t>(p)];
        auto& b = columns[static_cast<std::size_t>(q)];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int k = 0; k < m; ++k) {
          alpha += a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)];
          beta += b[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)];
          gamma += a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kTolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < m; ++k) {
          const double x = a[static_cast<std::size_t>(k)];
          const double y = b[static_cast<std::size_t>(k)];
          a[static_cast<std::size_t>(k)] = c * x - s * y;
          b[static_cast<std::size_t>(k)] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    double norm = 0.0;
    for (double v : columns[static_cast<std::size_t>(p)]) norm += v * v;
    sigma[static_cast<std::size_t>(p)] = std::sqrt(norm);
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double svd_oracle_mse(std::span<const double> channel, int height, int width, int thickness) {
  if (thickness < 1 || thickness > std::min(height, width)) {
    throw Error(ErrorCode::kInvalidArgument, "oracle thickness must lie in [1, min(H, W)]");
  }
  const std::vector<double> sigma = singular_values(channel, height, width);
  double tail = 0.0;
  for (std::size_t k = static_cast<std::size_t>(thickness); k < sigma.size(); ++k) tail += sigma[k] * sigma[k];
  return tail / (static_cast<double>(height) * width);
}

double gradient_check(std::span<const double> channel, int height, int width, int thickness,
                      std::span<const double> row, std::span<const double> col, double step) {
  const LossGradient analytic = loss_and_gradient(channel, height, width, thickness, row, col);
  std::vector<double> r(row.begin(), row.end()), c(col.begin(), col.end());
  double worst = 0.0;
  auto probe = [&](std::vector<double>& params, const std::vector<double>& grad) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      const double saved = params[k];
      params[k] = saved + step;
      const double up = channel_mse(channel, height, width, thickness, r, c);
      params[k] = saved - step;
      const double down = channel_mse(channel, height, width, thickness, r, c);
      params[k] = saved;
      const double fd = (up - down) / (2.0 * step);
      const double denom = std::max({1.0, std::abs(grad[k]), std::abs(fd)});
      worst = std::max(worst, std::abs(grad[k] - fd) / denom);
    }
  };
  probe(r, analytic.grad_row);
  probe(c, analytic.grad_col);
  return worst;
}

double gradient_check(std::span<const double> channel, int height, int width, int thickness, std::uint64_t seed) {
  Rng rng(seed);
  const auto row = rng.normal_vector<double>(static_cast<std::size_t>(height) * thickness);
  const auto col = rng.normal_vector<double>(static_cast<std::size_t>(width) * thickness);
  return gradient_check(channel, height, width, thickness, row, col);
}

}  // namespace creps
