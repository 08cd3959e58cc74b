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

#include <cctype>
#include <string>

#include "creps/error.hpp"
#include "creps/persistence.hpp"
#include "creps/renderer.hpp"

namespace creps {
namespace {

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  int read_int(const char* what) {
    skip_space_and_comments();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1l << 24)) throw Error(ErrorCode::kFormat, std::string("PPM ") + what + " is too large");
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::kFormat, std::string("PPM header is missing the ") + what);
    return static_cast<int>(value);
  }

  std::size_t pos_ = 0;
  std::span<const std::uint8_t> bytes_;
};

}  // namespace

std::vector<std::uint8_t> encode_ppm(const Image8& image) {
  if (image.height < 1 || image.width < 1 ||
      image.pixels.size() != static_cast<std::size_t>(image.height) * image.width * 3) {
    throw Error(ErrorCode::kShapeMismatch, "image pixel buffer does not match its dimensions");
  }
  const std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

Image8 decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error(ErrorCode::kFormat, "not a PNM file");
  if (bytes[1] != '6') {
    throw Error(ErrorCode::kFormat, std::string("unsupported PNM variant P") + static_cast<char>(bytes[1]) +
                                        " (only binary P6 is supported)");
  }
  PnmHeaderReader header(bytes);
  header.pos_ = 2;
  Image8 image;
  image.width = header.read_int("width");
  image.height = header.read_int("height");
  const int maxval = header.read_int("maxval");
  if (image.width < 1 || image.height < 1) throw Error(ErrorCode::kFormat, "PPM dimensions must be positive");
  if (maxval != 255) throw Error(ErrorCode::kFormat, "only maxval 255 is supported");
  if (header.pos_ >= bytes.size() || !std::isspace(bytes[header.pos_])) {
    throw Error(ErrorCode::kFormat, "PPM header must end with a single whitespace byte");
  }
  ++header.pos_;
  const std::size_t payload = static_cast<std::size_t>(image.width) * image.height * 3;
  if (bytes.size() - header.pos_ < payload) throw Error(ErrorCode::kTruncated, "PPM payload is truncated");
  image.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header.pos_),
                      bytes.begin() + static_cast<std::ptrdiff_t>(header.pos_ + payload));
  return image;
}

void write_image(const Image8& image, const std::filesystem::path& path) { write_file(path, encode_ppm(image)); }

FeatureMap<double> to_unit_range(const Image8& image) {
  FeatureMap<double> out(3, image.height, image.width);
  for (int i = 0; i < image.height; ++i) {
    for (int j = 0; j < image.width; ++j) {
      for (int c = 0; c < 3; ++c) {
        out.at(c, i, j) = image.pixels[(static_cast<std::size_t>(i) * image.width + j) * 3 + c] / 255.0;
      }
    }
  }
  return out;
}

FeatureMap<double> read_image(const std::filesystem::path& path) { return to_unit_range(decode_ppm(read_file(path))); }

}  // namespace creps
