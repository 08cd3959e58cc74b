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

#include "creps/persistence.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "creps/coords.hpp"
#include "creps/error.hpp"
#include "creps/generator.hpp"

namespace creps {
namespace {

constexpr std::string_view kContainerMagic = "CREPSW01";
constexpr std::string_view kFieldMagic = "CFLD0001";

class ByteWriter {
 public:
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int k = 0; k < 2; ++k) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool has(std::size_t n) const { return bytes_.size() - pos_ >= n; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::string_view raw(std::size_t n) {
    need(n);
    std::string_view out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int k = 0; k < 2; ++k) v |= static_cast<std::uint16_t>(bytes_[pos_++]) << (8 * k);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * k);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

 private:
  void need(std::size_t n) const {
    if (!has(n)) throw Error(ErrorCode::kTruncated, "unexpected end of data");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_magic(ByteReader& in, std::string_view magic, const char* what) {
  if (!in.has(magic.size())) throw Error(ErrorCode::kTruncated, std::string(what) + " is shorter than its magic");
  if (in.raw(magic.size()) != magic) {
    throw Error(ErrorCode::kBadMagic, std::string(what) + " does not start with " + std::string(magic));
  }
}

void validate_entries(std::span<const WeightEntry> entries) {
  std::set<std::string_view> names;
  for (const WeightEntry& e : entries) {
    if (!names.insert(e.name).second) throw Error(ErrorCode::kDuplicateName, "duplicate entry name '" + e.name + "'");
    if (e.name.size() > 0xFFFF) throw Error(ErrorCode::kInvalidArgument, "entry name longer than 65535 bytes");
    if (e.dims.size() > 0xFF) throw Error(ErrorCode::kInvalidArgument, "entry rank above 255");
    if (e.element_count() != e.data.size()) {
      throw Error(ErrorCode::kLengthMismatch, "entry '" + e.name + "' declares " + std::to_string(e.element_count()) +
                                                  " elements but holds " + std::to_string(e.data.size()));
    }
  }
}

nlohmann::json config_json(const GeneratorConfig& c) {
  return nlohmann::json{
      {"latent_dim", c.latent_dim},
      {"style_dim", c.style_dim},
      {"mapping_layers", c.mapping_layers},
      {"num_blocks", c.num_blocks},
      {"hidden_channels", c.hidden_channels},
      {"residual_channels", c.residual_channels},
      {"thickness", c.thickness},
      {"fourier_channels", c.fourier_channels},
      {"fourier_sigma", c.fourier_sigma},
      {"decoder_widths", c.decoder_widths},
      {"refinement_widths", c.refinement_widths},
      {"leaky_slope", c.leaky_slope},
      {"demod_epsilon", c.demod_epsilon},
      {"mode", std::string(to_string(c.mode))},
  };
}

}  // namespace

std::size_t WeightEntry::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> encode_container(std::span<const WeightEntry> entries) {
  validate_entries(entries);
  ByteWriter out;
  out.raw(kContainerMagic);
  out.u32(static_cast<std::uint32_t>(entries.size()));
  for (const WeightEntry& e : entries) {
    out.u16(static_cast<std::uint16_t>(e.name.size()));
    out.raw(e.name);
    out.u8(static_cast<std::uint8_t>(e.dims.size()));
    for (std::uint32_t d : e.dims) out.u32(d);
    for (float v : e.data) out.f32(v);
  }
  return out.take();
}

std::vector<WeightEntry> decode_container(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  check_magic(in, kContainerMagic, "weight container");
  const std::uint32_t count = in.u32();
  std::vector<WeightEntry> entries;
  std::set<std::string> names;
  for (std::uint32_t k = 0; k < count; ++k) {
    WeightEntry e;
    const std::uint16_t name_len = in.u16();
    e.name = std::string(in.raw(name_len));
    if (!names.insert(e.name).second) throw Error(ErrorCode::kDuplicateName, "duplicate entry name '" + e.name + "'");
    const std::uint8_t rank = in.u8();
    for (std::uint8_t r = 0; r < rank; ++r) e.dims.push_back(in.u32());
    const std::size_t n = e.element_count();
    if (n > in.remaining() / 4) {
      // A final entry whose payload is a whole number of floats simply
      // disagrees with its dims; anything else was cut off mid-stream.
      if (k + 1 == count && in.remaining() % 4 == 0) {
        throw Error(ErrorCode::kLengthMismatch, "entry '" + e.name + "' declares " + std::to_string(n) +
                                                    " values but holds " + std::to_string(in.remaining() / 4));
      }
      throw Error(ErrorCode::kTruncated, "entry '" + e.name + "' payload is shorter than its dims declare");
    }
    e.data.resize(n);
    for (auto& v : e.data) v = in.f32();
    entries.push_back(std::move(e));
  }
  if (in.remaining() != 0) throw Error(ErrorCode::kTrailingData, "weight container has bytes after its last entry");
  return entries;
}

void save_container(std::span<const WeightEntry> entries, const std::filesystem::path& path) {
  write_file(path, encode_container(entries));
}

std::vector<WeightEntry> load_container(const std::filesystem::path& path) { return decode_container(read_file(path)); }

GeneratorConfig parse_config(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "config must be a JSON object");

  GeneratorConfig c;
  const nlohmann::json known = config_json(c);
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::kUnknownKey, "unknown config key '" + key + "'");
  }
  auto read = [&](const char* key, auto& field) {
    if (!doc.contains(key)) return;
    try {
      doc.at(key).get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kParse, std::string("config field '") + key + "' has the wrong type");
    }
  };
  read("latent_dim", c.latent_dim);
  read("style_dim", c.style_dim);
  read("mapping_layers", c.mapping_layers);
  read("num_blocks", c.num_blocks);
  read("hidden_channels", c.hidden_channels);
  read("residual_channels", c.residual_channels);
  read("thickness", c.thickness);
  read("fourier_channels", c.fourier_channels);
  read("fourier_sigma", c.fourier_sigma);
  read("decoder_widths", c.decoder_widths);
  read("refinement_widths", c.refinement_widths);
  read("leaky_slope", c.leaky_slope);
  read("demod_epsilon", c.demod_epsilon);
  if (doc.contains("mode")) {
    std::string mode;
    read("mode", mode);
    try {
      c.mode = parse_mode(mode);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvariant, std::string("config field 'mode': ") + e.what());
    }
  }
  c.validate();
  return c;
}

std::string config_to_json(const GeneratorConfig& config) { return config_json(config).dump(2) + "\n"; }

GeneratorConfig load_config(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  return parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void save_config(const GeneratorConfig& config, const std::filesystem::path& path) {
  write_text(path, config_to_json(config));
}

std::vector<std::uint8_t> encode_coord_field(const CoordField& field) {
  field.validate();
  ByteWriter out;
  out.raw(kFieldMagic);
  out.u32(static_cast<std::uint32_t>(field.height));
  out.u32(static_cast<std::uint32_t>(field.width));
  for (std::size_t k = 0; k < field.rows.size(); ++k) {
    out.f32(static_cast<float>(field.rows[k]));
    out.f32(static_cast<float>(field.cols[k]));
  }
  return out.take();
}

CoordField decode_coord_field(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  check_magic(in, kFieldMagic, "coordinate field");
  CoordField field;
  const std::uint32_t height = in.u32();
  const std::uint32_t width = in.u32();
  if (height == 0 || width == 0 || height > 1u << 20 || width > 1u << 20) {
    throw Error(ErrorCode::kFormat, "coordinate field dimensions out of range");
  }
  const std::size_t n = static_cast<std::size_t>(height) * width;
  if (n > in.remaining() / 8) throw Error(ErrorCode::kTruncated, "coordinate field payload is truncated");
  field.height = static_cast<int>(height);
  field.width = static_cast<int>(width);
  field.rows.resize(n);
  field.cols.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    field.rows[k] = in.f32();
    field.cols[k] = in.f32();
  }
  if (in.remaining() != 0) throw Error(ErrorCode::kTrailingData, "coordinate field has bytes after its payload");
  try {
    field.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, std::string("malformed coordinate field: ") + e.what());
  }
  return field;
}

void save_coord_field(const CoordField& field, const std::filesystem::path& path) {
  write_file(path, encode_coord_field(field));
}

CoordField load_coord_field(const std::filesystem::path& path) { return decode_coord_field(read_file(path)); }

void write_trace_csv(std::span<const double> mse_trace, const std::filesystem::path& path) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,mse\n";
  for (std::size_t k = 0; k < mse_trace.size(); ++k) out << k << ',' << mse_trace[k] << '\n';
  write_text(path, out.str());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "failed reading '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace creps
