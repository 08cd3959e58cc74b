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

#include "creps/coords.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "creps/error.hpp"
#include "creps/persistence.hpp"
#include "creps/rng.hpp"

namespace creps {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " contains a non-finite value");
  }
}

void check_axis(const FourierAxis& axis, int channels, int thickness, const char* name) {
  const auto expected = static_cast<std::size_t>(channels) * static_cast<std::size_t>(thickness);
  if (axis.channels != channels || axis.thickness != thickness || axis.frequencies.size() != expected ||
      axis.phases.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch, std::string("fourier ") + name + " parameters are not [" +
                                               std::to_string(channels) + " x " + std::to_string(thickness) + "]");
  }
}

}  // namespace

void Transform::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "transform scale must be positive and finite");
  }
  if (!std::isfinite(shift_row) || !std::isfinite(shift_col)) {
    throw Error(ErrorCode::kInvalidArgument, "transform shifts must be finite");
  }
}

void FourierParams::validate(int channels, int thickness) const {
  check_axis(row, channels, thickness, "row");
  check_axis(column, channels, thickness, "column");
}

FourierParams init_fourier(int channels, int thickness, double sigma, Rng& rng) {
  FourierParams params;
  params.sigma = sigma;
  const auto n = static_cast<std::size_t>(channels) * static_cast<std::size_t>(thickness);
  for (FourierAxis* axis : {&params.row, &params.column}) {
    axis->channels = channels;
    axis->thickness = thickness;
    axis->frequencies = rng.normal_vector<float>(n, sigma);
    axis->phases = rng.uniform_vector<float>(n);
  }
  return params;
}

void CoordField::validate() const {
  if (height < 1 || width < 1) throw Error(ErrorCode::kInvalidArgument, "coordinate field must be at least 1x1");
  const auto n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  if (rows.size() != n || cols.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "coordinate field arrays do not match its declared shape");
  }
  require_finite(rows, "coordinate field rows");
  require_finite(cols, "coordinate field cols");
}

CoordVector grid_coords(int resolution, const Transform& transform, Axis axis) {
  if (resolution < 1) throw Error(ErrorCode::kInvalidArgument, "grid resolution must be at least 1");
  transform.validate();
  CoordVector out;
  out.axis = axis;
  out.values.resize(static_cast<std::size_t>(resolution));
  const double shift = transform.shift(axis);
  for (int i = 0; i < resolution; ++i) {
    const double centre = -1.0 + static_cast<double>(2 * i + 1) / resolution;
    out.values[static_cast<std::size_t>(i)] = transform.scale * centre + shift;
  }
  return out;
}

template <typename T>
std::vector<T> fourier_encode(std::span<const double> coords, const FourierAxis& axis) {
  check_axis(axis, axis.channels, axis.thickness, "axis");
  require_finite(coords, "coordinates");
  const std::size_t n = coords.size();
  const auto thickness = static_cast<std::size_t>(axis.thickness);
  std::vector<T> out(static_cast<std::size_t>(axis.channels) * n * thickness);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < static_cast<std::size_t>(axis.channels); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      T* dst = out.data() + (k * n + i) * thickness;
      for (std::size_t d = 0; d < thickness; ++d) {
        const double b = axis.frequencies[k * thickness + d];
        const double phi = axis.phases[k * thickness + d];
        dst[d] = static_cast<T>(std::sin(kTwoPi * (b * coords[i] + phi)));
      }
    }
  }
  return out;
}

template <typename T>
std::vector<T> fourier_encode(const CoordVector& coords, const FourierParams& params) {
  return fourier_encode<T>(std::span<const double>(coords.values), params.for_axis(coords.axis));
}

template std::vector<float> fourier_encode<float>(std::span<const double>, const FourierAxis&);
template std::vector<double> fourier_encode<double>(std::span<const double>, const FourierAxis&);
template std::vector<float> fourier_encode<float>(const CoordVector&, const FourierParams&);
template std::vector<double> fourier_encode<double>(const CoordVector&, const FourierParams&);

CoordField default_field(int height, int width) {
  const CoordVector r = grid_coords(height, Transform{}, Axis::kRow);
  const CoordVector c = grid_coords(width, Transform{}, Axis::kColumn);
  CoordField field;
  field.height = height;
  field.width = width;
  field.rows.resize(static_cast<std::size_t>(height) * width);
  field.cols.resize(field.rows.size());
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const auto idx = static_cast<std::size_t>(i) * width + j;
      field.rows[idx] = r.values[static_cast<std::size_t>(i)];
      field.cols[idx] = c.values[static_cast<std::size_t>(j)];
    }
  }
  return field;
}

namespace {

CoordField rotate(const Rotation& rotation, int height, int width) {
  if (!std::isfinite(rotation.angle)) throw Error(ErrorCode::kInvalidArgument, "rotation angle must be finite");
  CoordField field = default_field(height, width);
  // Whole turns reduce to exactly zero so that a full rotation reproduces
  // the default grid bit-for-bit.
  const double theta = std::fmod(rotation.angle, 2.0 * std::numbers::pi);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  for (std::size_t idx = 0; idx < field.rows.size(); ++idx) {
    const double r = field.rows[idx];
    const double c = field.cols[idx];
    // (x, y) = (c, r) rotated counter-clockwise by theta.
    field.cols[idx] = cs * c - sn * r;
    field.rows[idx] = sn * c + cs * r;
  }
  return field;
}

CoordField displace(const Elastic& elastic, int height, int width) {
  CoordField field = default_field(height, width);
  if (elastic.row_displacement.size() != field.rows.size() || elastic.col_displacement.size() != field.cols.size()) {
    throw Error(ErrorCode::kShapeMismatch, "elastic displacement arrays must be [height x width]");
  }
  require_finite(elastic.row_displacement, "row displacement");
  require_finite(elastic.col_displacement, "column displacement");
  for (std::size_t idx = 0; idx < field.rows.size(); ++idx) {
    field.rows[idx] += elastic.row_displacement[idx];
    field.cols[idx] += elastic.col_displacement[idx];
  }
  return field;
}

}  // namespace

CoordField make_coord_field(const FieldKind& kind, int height, int width) {
  if (const auto* custom = std::get_if<CustomField>(&kind)) {
    CoordField field = load_coord_field(custom->path);
    if ((height > 0 && field.height != height) || (width > 0 && field.width != width)) {
      throw Error(ErrorCode::kShapeMismatch, "custom coordinate field does not match the requested resolution");
    }
    return field;
  }
  if (height < 1 || width < 1) throw Error(ErrorCode::kInvalidArgument, "field resolution must be at least 1x1");
  if (const auto* rotation = std::get_if<Rotation>(&kind)) return rotate(*rotation, height, width);
  return displace(std::get<Elastic>(kind), height, width);
}

}  // namespace creps
