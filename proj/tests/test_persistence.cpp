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

#include <cstring>
#include <fstream>

#include "creps/generator.hpp"
#include "creps/persistence.hpp"
#include "oracles.hpp"

namespace creps {
namespace {

// Little-endian byte builder for hand-made malformed files.
struct Bytes {
  std::vector<std::uint8_t> b;
  Bytes& raw(std::string_view s) {
    b.insert(b.end(), s.begin(), s.end());
    return *this;
  }
  Bytes& u8(std::uint8_t v) {
    b.push_back(v);
    return *this;
  }
  Bytes& u16(std::uint16_t v) { return u8(v & 0xFF).u8(v >> 8); }
  Bytes& u32(std::uint32_t v) { return u16(v & 0xFFFF).u16(v >> 16); }
  Bytes& f32(float f) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    return u32(v);
  }
  Bytes& entry_header(std::string_view name, std::vector<std::uint32_t> dims) {
    u16(static_cast<std::uint16_t>(name.size())).raw(name).u8(static_cast<std::uint8_t>(dims.size()));
    for (auto d : dims) u32(d);
    return *this;
  }
};

ErrorCode decode_code(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_container(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return ErrorCode::kInvariant;
}

TEST(Persistence, RandomWeightsRoundTripByteIdentical) {
  const auto w = init_weights(oracle::small_config(), 3);
  const auto path = oracle::temp_path("weights.bin");
  save_container(to_entries(w), path);
  const auto first = read_file(path);
  save_container(load_container(path), path);
  EXPECT_EQ(read_file(path), first);
  EXPECT_EQ(encode_container(load_container(path)), first);
}

TEST(Persistence, LayoutIsLittleEndian) {
  const std::vector<WeightEntry> e{{"a", {2}, {1.0f, -2.0f}}};
  const auto bytes = encode_container(e);
  const auto expected = Bytes{}.raw("CREPSW01").u32(1).entry_header("a", {2}).f32(1.0f).f32(-2.0f).b;
  EXPECT_EQ(bytes, expected);
}

TEST(Persistence, BadMagic) {
  EXPECT_EQ(decode_code(Bytes{}.raw("CREPSW99").u32(0).b), ErrorCode::kBadMagic);
  EXPECT_EQ(decode_code(Bytes{}.raw("CREP").b), ErrorCode::kTruncated);
}

TEST(Persistence, LengthMismatch) {
  auto bytes = Bytes{}.raw("CREPSW01").u32(1).entry_header("x", {2, 3});
  for (int k = 0; k < 5; ++k) bytes.f32(1.0f);
  EXPECT_EQ(decode_code(bytes.b), ErrorCode::kLengthMismatch);
  const std::vector<WeightEntry> e{{"x", {2, 3}, std::vector<float>(5, 1.0f)}};
  try {
    encode_container(e);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Persistence, Truncated) {
  auto bytes = Bytes{}.raw("CREPSW01").u32(2).entry_header("x", {2}).f32(1.0f);
  EXPECT_EQ(decode_code(bytes.b), ErrorCode::kTruncated);  // non-final entry cut short
  auto partial = Bytes{}.raw("CREPSW01").u32(1).entry_header("x", {1}).u16(7);
  EXPECT_EQ(decode_code(partial.b), ErrorCode::kTruncated);  // cut inside a float
  auto header = Bytes{}.raw("CREPSW01").u32(1).u16(10).raw("abc");
  EXPECT_EQ(decode_code(header.b), ErrorCode::kTruncated);
}

TEST(Persistence, DuplicateNames) {
  auto bytes = Bytes{}.raw("CREPSW01").u32(2).entry_header("x", {1}).f32(1).entry_header("x", {1}).f32(2);
  EXPECT_EQ(decode_code(bytes.b), ErrorCode::kDuplicateName);
  const std::vector<WeightEntry> e{{"x", {1}, {1.0f}}, {"x", {1}, {2.0f}}};
  EXPECT_THROW(encode_container(e), Error);
}

TEST(Persistence, TrailingData) {
  auto bytes = Bytes{}.raw("CREPSW01").u32(1).entry_header("x", {1}).f32(1).u8(0);
  EXPECT_EQ(decode_code(bytes.b), ErrorCode::kTrailingData);
}

TEST(Persistence, ErrorCodesAreDistinct) {
  const ErrorCode codes[] = {ErrorCode::kBadMagic, ErrorCode::kTruncated, ErrorCode::kDuplicateName,
                             ErrorCode::kLengthMismatch, ErrorCode::kTrailingData};
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b) {
      EXPECT_NE(codes[a], codes[b]);
      EXPECT_NE(to_string(codes[a]), to_string(codes[b]));
    }
}

TEST(Persistence, EmptyConfigGivesDefaults) {
  const GeneratorConfig c = parse_config("{}");
  EXPECT_EQ(c, GeneratorConfig{});
  EXPECT_EQ(c.num_blocks, 6);
  EXPECT_EQ(c.thickness, 8);
  EXPECT_EQ(c.hidden_channels, 128);
}

TEST(Persistence, ConfigInvariantNamesField) {
  try {
    parse_config(R"({"thickness": 0})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariant);
    EXPECT_NE(std::string(e.what()).find("thickness"), std::string::npos);
  }
}

TEST(Persistence, ConfigStrictness) {
  auto code = [](std::string_view text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code(R"({"thicknes": 4})"), ErrorCode::kUnknownKey);
  EXPECT_EQ(code(R"({"thickness": 4)"), ErrorCode::kParse);
  EXPECT_EQ(code(R"([1, 2])"), ErrorCode::kParse);
  EXPECT_EQ(code(R"({"thickness": "four"})"), ErrorCode::kParse);
  EXPECT_EQ(code(R"({"mode": "sparse"})"), ErrorCode::kInvariant);
}

TEST(Persistence, ConfigRoundTrip) {
  GeneratorConfig c = oracle::small_config(Mode::kDense);
  c.fourier_sigma = 3.25;
  c.leaky_slope = 0.1;
  EXPECT_EQ(parse_config(config_to_json(c)), c);
  const auto path = oracle::temp_path("cfg.json");
  save_config(c, path);
  EXPECT_EQ(load_config(path), c);
  EXPECT_EQ(parse_config(R"({"mode": "dense", "thickness": 2})").thickness, 2);
}

TEST(Persistence, CoordFieldRoundTrip) {
  CoordField f = make_coord_field(Rotation{0.3}, 3, 4);
  const auto bytes = encode_coord_field(f);
  EXPECT_EQ(bytes.size(), 8u + 8 + 12 * 8);
  const CoordField g = decode_coord_field(bytes);
  EXPECT_EQ(encode_coord_field(g), bytes);
  for (std::size_t k = 0; k < f.rows.size(); ++k) EXPECT_EQ(g.rows[k], static_cast<float>(f.rows[k]));
}

TEST(Persistence, CoordFieldMalformed) {
  auto code = [](const std::vector<std::uint8_t>& b) {
    try {
      decode_coord_field(b);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code(Bytes{}.raw("CFLD0002").u32(1).u32(1).f32(0).f32(0).b), ErrorCode::kBadMagic);
  EXPECT_EQ(code(Bytes{}.raw("CFLD0001").u32(1).u32(2).f32(0).f32(0).b), ErrorCode::kTruncated);
  EXPECT_EQ(code(Bytes{}.raw("CFLD0001").u32(1).u32(1).f32(0).f32(0).u8(1).b), ErrorCode::kTrailingData);
  EXPECT_EQ(code(Bytes{}.raw("CFLD0001").u32(0).u32(1).b), ErrorCode::kFormat);
  EXPECT_EQ(code(Bytes{}.raw("CFLD0001").u32(1).u32(1).f32(std::numeric_limits<float>::infinity()).f32(0).b),
            ErrorCode::kFormat);
}

TEST(Persistence, TraceCsv) {
  const std::vector<double> trace{0.5, 0.25};
  const auto path = oracle::temp_path("trace.csv");
  write_trace_csv(trace, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "iteration,mse\n0,0.5\n1,0.25\n");
}

TEST(Persistence, MissingFileIsIoError) {
  try {
    load_container(oracle::temp_path("nope.bin"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace creps
