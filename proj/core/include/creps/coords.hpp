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
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace creps {

class Rng;

enum class Axis { kRow, kColumn };

// Normalized image-plane coordinates along one axis.
struct CoordVector {
  std::vector<double> values;
  Axis axis = Axis::kRow;

  std::size_t size() const { return values.size(); }
};

// Zoom and pan applied to the default grid as e' = scale * e + shift.
// scale > 1 zooms out, scale < 1 zooms in.
struct Transform {
  double shift_row = 0.0;
  double shift_col = 0.0;
  double scale = 1.0;

  void validate() const;
  double shift(Axis axis) const { return axis == Axis::kRow ? shift_row : shift_col; }
};

// Learned frequencies and phases for one axis, laid out [channels x thickness].
struct FourierAxis {
  int channels = 0;
  int thickness = 0;
  std::vector<float> frequencies;
  std::vector<float> phases;
};

struct FourierParams {
  FourierAxis row;
  FourierAxis column;
  double sigma = 8.0;

  const FourierAxis& for_axis(Axis axis) const { return axis == Axis::kRow ? row : column; }

  // Throws kShapeMismatch unless both axes are [channels x thickness].
  void validate(int channels, int thickness) const;
};

// Frequencies ~ N(0, sigma^2), phases ~ U[0, 1). Row set is drawn first.
FourierParams init_fourier(int channels, int thickness, double sigma, Rng& rng);

// Per-pixel coordinates (r_ij, c_ij), both row-major [height x width].
struct CoordField {
  int height = 0;
  int width = 0;
  std::vector<double> rows;
  std::vector<double> cols;

  void validate() const;
  double row(int i, int j) const { return rows[static_cast<std::size_t>(i) * width + j]; }
  double col(int i, int j) const { return cols[static_cast<std::size_t>(i) * width + j]; }
};

// Pixel-center grid e_i = -1 + (2i + 1) / n, then e'_i = scale * e_i + shift.
CoordVector grid_coords(int resolution, const Transform& transform, Axis axis);

// feature[k, i, d] = sin(2*pi*(b[k, d] * e_i + phi[k, d])) with the
// frequency set of `coords.axis`. Output is [channels x n x thickness].
template <typename T>
std::vector<T> fourier_encode(const CoordVector& coords, const FourierParams& params);

// Same encoding on a raw coordinate list.
template <typename T>
std::vector<T> fourier_encode(std::span<const double> coords, const FourierAxis& axis);

struct Rotation {
  double angle = 0.0;  // radians, positive turns the sampling grid counter-clockwise
};
struct Elastic {
  std::vector<double> row_displacement;  // [height x width]
  std::vector<double> col_displacement;  // [height x width]
};
struct CustomField {
  std::filesystem::path path;
};
using FieldKind = std::variant<Rotation, Elastic, CustomField>;

// Default pixel-center grid broadcast to every pixel.
CoordField default_field(int height, int width);

CoordField make_coord_field(const FieldKind& kind, int height, int width);

}  // namespace creps
