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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "creps/error.hpp"
#include "creps/parallel.hpp"

namespace creps {

// Dense activation laid out [channels x height x width].
template <typename T>
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<T> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w)
      : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, T{0}) {}
  FeatureMap(int c, int h, int w, std::vector<T> values) : channels(c), height(h), width(w), data(std::move(values)) {
    if (data.size() != static_cast<std::size_t>(c) * h * w) {
      throw Error(ErrorCode::kShapeMismatch, "feature map data does not match its shape");
    }
  }

  std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }
  T& at(int c, int i, int j) { return data[(static_cast<std::size_t>(c) * height + i) * width + j]; }
  const T& at(int c, int i, int j) const { return data[(static_cast<std::size_t>(c) * height + i) * width + j]; }
};

// Thick bi-line: per-channel row embedding [C x H x D] and column embedding
// [C x W x D], stored as separate halves so that H != W is representable.
template <typename T>
struct BilineFeature {
  int channels = 0;
  int height = 0;
  int width = 0;
  int thickness = 0;
  std::vector<T> row_half;
  std::vector<T> col_half;

  BilineFeature() = default;
  BilineFeature(int c, int h, int w, int d)
      : channels(c),
        height(h),
        width(w),
        thickness(d),
        row_half(static_cast<std::size_t>(c) * h * d, T{0}),
        col_half(static_cast<std::size_t>(c) * w * d, T{0}) {}

  T& row(int c, int i, int d) { return row_half[(static_cast<std::size_t>(c) * height + i) * thickness + d]; }
  T& col(int c, int j, int d) { return col_half[(static_cast<std::size_t>(c) * width + j) * thickness + d]; }
  const T& row(int c, int i, int d) const {
    return row_half[(static_cast<std::size_t>(c) * height + i) * thickness + d];
  }
  const T& col(int c, int j, int d) const {
    return col_half[(static_cast<std::size_t>(c) * width + j) * thickness + d];
  }

  void validate() const {
    if (channels < 1 || height < 1 || width < 1 || thickness < 1) {
      throw Error(ErrorCode::kInvalidArgument, "bi-line dimensions must all be at least 1");
    }
    if (row_half.size() != static_cast<std::size_t>(channels) * height * thickness ||
        col_half.size() != static_cast<std::size_t>(channels) * width * thickness) {
      throw Error(ErrorCode::kShapeMismatch, "bi-line halves do not match the declared shape");
    }
  }

  // The single-tensor view f = [f^r, f^c], shape [C x H x 2D]. Square only.
  std::vector<T> concatenated() const {
    if (height != width) throw Error(ErrorCode::kShapeMismatch, "concatenated bi-line view requires H == W");
    std::vector<T> out(static_cast<std::size_t>(channels) * height * 2 * thickness);
    for (int c = 0; c < channels; ++c) {
      for (int i = 0; i < height; ++i) {
        T* dst = out.data() + (static_cast<std::size_t>(c) * height + i) * 2 * thickness;
        for (int d = 0; d < thickness; ++d) {
          dst[d] = row(c, i, d);
          dst[thickness + d] = col(c, i, d);
        }
      }
    }
    return out;
  }
};

namespace detail {

// F = sum_d r_d * c_d in ascending d. Every entry point funnels here so that
// full, pixel and subset compositions are bit-identical.
template <typename T>
inline T dot_thickness(const T* row, const T* col, int thickness) {
  T acc = T{0};
  for (int d = 0; d < thickness; ++d) acc += row[d] * col[d];
  return acc;
}

}  // namespace detail

// Raw composition on channel-major halves; used by the generator, which keeps
// its trunk activations in flat buffers.
template <typename T>
void compose_into(std::span<const T> row_half, std::span<const T> col_half, int channels, int height, int width,
                  int thickness, std::span<T> out) {
  const auto rows = static_cast<std::size_t>(channels) * height;
  parallel_for(rows, 8, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ci = begin; ci < end; ++ci) {
      const std::size_t c = ci / static_cast<std::size_t>(height);
      const T* r = row_half.data() + ci * thickness;
      const T* cbase = col_half.data() + c * width * thickness;
      T* dst = out.data() + ci * width;
      for (int j = 0; j < width; ++j) dst[j] = detail::dot_thickness(r, cbase + static_cast<std::size_t>(j) * thickness, thickness);
    }
  });
}

template <typename T>
FeatureMap<T> compose(const BilineFeature<T>& b) {
  b.validate();
  FeatureMap<T> out(b.channels, b.height, b.width);
  compose_into<T>(b.row_half, b.col_half, b.channels, b.height, b.width, b.thickness, out.data);
  return out;
}

template <typename T>
std::vector<T> compose_pixel(const BilineFeature<T>& b, int i, int j) {
  b.validate();
  if (i < 0 || i >= b.height || j < 0 || j >= b.width) {
    throw Error(ErrorCode::kOutOfRange, "compose_pixel index outside the bi-line grid");
  }
  std::vector<T> out(static_cast<std::size_t>(b.channels));
  for (int c = 0; c < b.channels; ++c) out[static_cast<std::size_t>(c)] = detail::dot_thickness(&b.row(c, i, 0), &b.col(c, j, 0), b.thickness);
  return out;
}

// output[c, a, b] = compose_pixel(b, row_idx[a], col_idx[b]); duplicates allowed.
template <typename T>
FeatureMap<T> compose_subset(const BilineFeature<T>& b, std::span<const int> row_idx, std::span<const int> col_idx) {
  b.validate();
  for (int i : row_idx) {
    if (i < 0 || i >= b.height) throw Error(ErrorCode::kOutOfRange, "compose_subset row index out of range");
  }
  for (int j : col_idx) {
    if (j < 0 || j >= b.width) throw Error(ErrorCode::kOutOfRange, "compose_subset column index out of range");
  }
  FeatureMap<T> out(b.channels, static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
  for (int c = 0; c < b.channels; ++c) {
    for (std::size_t a = 0; a < row_idx.size(); ++a) {
      for (std::size_t k = 0; k < col_idx.size(); ++k) {
        out.at(c, static_cast<int>(a), static_cast<int>(k)) =
            detail::dot_thickness(&b.row(c, row_idx[a], 0), &b.col(c, col_idx[k], 0), b.thickness);
      }
    }
  }
  return out;
}

// Element count of both embeddings relative to the dense map: D(H + W) / (HW).
double storage_ratio(int thickness, int height, int width);

template <typename T>
double storage_ratio(const BilineFeature<T>& b) {
  return storage_ratio(b.thickness, b.height, b.width);
}

}  // namespace creps
