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

#include "creps/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "creps/error.hpp"
#include "creps/rng.hpp"

namespace creps {
namespace {

constexpr int kRgbChannels = 3;
constexpr std::uint64_t kWeightStream = 0;
constexpr std::uint64_t kLatentStream = 1;

[[noreturn]] void invariant(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kInvariant, "config field '" + field + "' " + why);
}

AffineLayer make_layer(int in, int out) {
  AffineLayer layer;
  layer.in = in;
  layer.out = out;
  layer.weight.assign(static_cast<std::size_t>(in) * out, 0.0f);
  layer.bias.assign(static_cast<std::size_t>(out), 0.0f);
  return layer;
}

ModulatedLayer make_modulated(int style_dim, int in, int out) {
  return {make_layer(style_dim, in), make_layer(in, out)};
}

SynthesisBlockWeights make_block(int style_dim, int in, int out) {
  return {make_modulated(style_dim, in, out), make_modulated(style_dim, out, out)};
}

// All tensors shaped per config, zero-filled.
GeneratorWeights skeleton(const GeneratorConfig& c) {
  GeneratorWeights w;
  for (int k = 0; k < c.mapping_layers; ++k) w.mapping.push_back(make_layer(k == 0 ? c.latent_dim : c.style_dim, c.style_dim));
  for (FourierAxis* axis : {&w.fourier.row, &w.fourier.column}) {
    axis->channels = c.fourier_channels;
    axis->thickness = c.thickness;
    axis->frequencies.assign(static_cast<std::size_t>(c.fourier_channels) * c.thickness, 0.0f);
    axis->phases = axis->frequencies;
  }
  w.fourier.sigma = c.fourier_sigma;
  for (int l = 0; l < c.num_blocks; ++l) {
    w.blocks.push_back(make_block(c.style_dim, l == 0 ? c.fourier_channels : c.hidden_channels, c.hidden_channels));
    w.projections.push_back(make_modulated(c.style_dim, c.hidden_channels, c.residual_channels));
    DecoderWeights decoder;
    for (std::size_t k = 0; k + 1 < c.decoder_widths.size(); ++k) {
      decoder.layers.push_back(make_layer(c.decoder_widths[k], c.decoder_widths[k + 1]));
    }
    w.decoders.push_back(std::move(decoder));
  }
  const auto& r = c.refinement_widths;
  w.refinement.block_a = make_block(c.style_dim, r[0], r[1]);
  w.refinement.to_rgb_a = make_modulated(c.style_dim, r[1], kRgbChannels);
  w.refinement.block_b = make_block(c.style_dim, r[1], r[2]);
  w.refinement.to_rgb_b = make_modulated(c.style_dim, r[2], kRgbChannels);
  return w;
}

// Visits every affine layer in the canonical (init and serialization) order.
template <typename Weights, typename Fn>
void visit_layers(Weights& w, Fn&& fn) {
  auto modulated = [&](const std::string& prefix, auto& layer) {
    fn(prefix + ".style", layer.style);
    fn(prefix, layer.conv);
  };
  auto block = [&](const std::string& prefix, auto& b) {
    modulated(prefix + ".conv0", b.first);
    modulated(prefix + ".conv1", b.second);
  };
  for (std::size_t k = 0; k < w.mapping.size(); ++k) fn("mapping." + std::to_string(k), w.mapping[k]);
  for (std::size_t l = 0; l < w.blocks.size(); ++l) block("block." + std::to_string(l), w.blocks[l]);
  for (std::size_t l = 0; l < w.projections.size(); ++l) modulated("proj." + std::to_string(l), w.projections[l]);
  for (std::size_t l = 0; l < w.decoders.size(); ++l) {
    for (std::size_t k = 0; k < w.decoders[l].layers.size(); ++k) {
      fn("decoder." + std::to_string(l) + "." + std::to_string(k), w.decoders[l].layers[k]);
    }
  }
  block("refine.block_a", w.refinement.block_a);
  modulated("refine.to_rgb_a", w.refinement.to_rgb_a);
  block("refine.block_b", w.refinement.block_b);
  modulated("refine.to_rgb_b", w.refinement.to_rgb_b);
}

template <typename Weights, typename Fn>
void visit_fourier(Weights& w, Fn&& fn) {
  fn("fourier.row.freq", w.fourier.row.frequencies);
  fn("fourier.row.phase", w.fourier.row.phases);
  fn("fourier.col.freq", w.fourier.column.frequencies);
  fn("fourier.col.phase", w.fourier.column.phases);
}

// Modulated weights computed once per (layer, style) and applied at every
// location of a [in x count] buffer.
TrackedBuffer<float> modulated_apply(const ModulatedLayer& layer, const StyleVector& w, const float* x_data,
                                     std::size_t x_size, std::size_t count, bool demodulate, Activation act,
                                     const GeneratorConfig& c, ActivationMeter* meter) {
  const std::vector<float> weights =
      modulate_weights(layer.view(), std::span<const float>(w.w), demodulate, static_cast<float>(c.demod_epsilon));
  TrackedBuffer<float> y(static_cast<std::size_t>(layer.conv.out) * count, meter);
  apply_pixelwise<float>(weights, layer.conv.bias, layer.conv.in, layer.conv.out,
                         std::span<const float>(x_data, x_size), count, y.span(), act,
                         static_cast<float>(c.leaky_slope));
  return y;
}

TrackedBuffer<float> modulated_apply(const ModulatedLayer& layer, const StyleVector& w,
                                     const TrackedBuffer<float>& x, std::size_t count, bool demodulate,
                                     Activation act, const GeneratorConfig& c, ActivationMeter* meter) {
  return modulated_apply(layer, w, x.data(), x.size(), count, demodulate, act, c, meter);
}

void scale_in_place(TrackedBuffer<float>& x, float gain) {
  float* p = x.data();
  for (std::size_t k = 0; k < x.size(); ++k) p[k] *= gain;
}

// Consumes x. The input is released as soon as the first layer has run.
TrackedBuffer<float> run_block(const SynthesisBlockWeights& block, const StyleVector& w, TrackedBuffer<float> x,
                               std::size_t count, const GeneratorConfig& c, ActivationMeter* meter) {
  TrackedBuffer<float> hidden = modulated_apply(block.first, w, x, count, true, Activation::kLeakyRelu, c, meter);
  x.reset();
  TrackedBuffer<float> out = modulated_apply(block.second, w, hidden, count, true, Activation::kLeakyRelu, c, meter);
  hidden.reset();
  return out;
}

// Consumes the fused map; each layer's input is released once its output exists.
TrackedBuffer<float> run_decoder(const DecoderWeights& decoder, TrackedBuffer<float> x, std::size_t count,
                                 const GeneratorConfig& c, ActivationMeter* meter) {
  for (const AffineLayer& layer : decoder.layers) {
    const std::vector<float> weights = scaled_weights(layer.view());
    TrackedBuffer<float> y(static_cast<std::size_t>(layer.out) * count, meter);
    apply_pixelwise<float>(weights, layer.bias, layer.in, layer.out, x.span(), count, y.span(),
                           Activation::kLeakyRelu, static_cast<float>(c.leaky_slope));
    x = std::move(y);
  }
  return x;
}

FeatureMap<float> run_refinement(const RefinementWeights& r, const StyleVector& w, TrackedBuffer<float> fused,
                                 int height, int width, const GeneratorConfig& c, ActivationMeter* meter) {
  const std::size_t count = static_cast<std::size_t>(height) * width;
  TrackedBuffer<float> h1 = modulated_apply(r.block_a.first, w, fused, count, true, Activation::kLeakyRelu, c, meter);
  fused.reset();
  TrackedBuffer<float> x1 = modulated_apply(r.block_a.second, w, h1, count, true, Activation::kLeakyRelu, c, meter);
  h1.reset();
  TrackedBuffer<float> rgb = modulated_apply(r.to_rgb_a, w, x1, count, false, Activation::kLinear, c, meter);
  TrackedBuffer<float> h2 = modulated_apply(r.block_b.first, w, x1, count, true, Activation::kLeakyRelu, c, meter);
  x1.reset();
  TrackedBuffer<float> x2 = modulated_apply(r.block_b.second, w, h2, count, true, Activation::kLeakyRelu, c, meter);
  h2.reset();
  TrackedBuffer<float> rgb2 = modulated_apply(r.to_rgb_b, w, x2, count, false, Activation::kLinear, c, meter);
  x2.reset();
  float* dst = rgb.data();
  const float* src = rgb2.data();
  for (std::size_t k = 0; k < rgb.size(); ++k) dst[k] += src[k];
  rgb2.reset();

  FeatureMap<float> image;
  image.channels = kRgbChannels;
  image.height = height;
  image.width = width;
  image.data = rgb.release_storage();
  return image;
}

FeatureMap<float> as_map(const TrackedBuffer<float>& buffer, int channels, int height, int width) {
  FeatureMap<float> map;
  map.channels = channels;
  map.height = height;
  map.width = width;
  map.data.assign(buffer.data(), buffer.data() + buffer.size());
  return map;
}

void check_style(const StyleVector& w, const GeneratorConfig& c) {
  if (w.w.size() != static_cast<std::size_t>(c.style_dim)) {
    throw Error(ErrorCode::kShapeMismatch, "style vector length differs from style_dim");
  }
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::kBiline ? "biline" : "dense"; }

Mode parse_mode(std::string_view text) {
  if (text == "biline") return Mode::kBiline;
  if (text == "dense") return Mode::kDense;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + std::string(text) + "' (expected biline or dense)");
}

void GeneratorConfig::validate() const {
  const std::pair<const char*, int> positive[] = {
      {"latent_dim", latent_dim},           {"style_dim", style_dim},
      {"mapping_layers", mapping_layers},   {"num_blocks", num_blocks},
      {"hidden_channels", hidden_channels}, {"residual_channels", residual_channels},
      {"thickness", thickness},             {"fourier_channels", fourier_channels},
  };
  for (const auto& [name, value] : positive) {
    if (value < 1) invariant(name, "must be at least 1");
  }
  if (!(fourier_sigma > 0.0) || !std::isfinite(fourier_sigma)) invariant("fourier_sigma", "must be positive");
  if (decoder_widths.size() < 2) invariant("decoder_widths", "needs at least two widths");
  for (int v : decoder_widths) {
    if (v < 1) invariant("decoder_widths", "entries must be at least 1");
  }
  if (decoder_widths.front() != residual_channels || decoder_widths.back() != residual_channels) {
    invariant("decoder_widths", "must start and end at residual_channels");
  }
  if (refinement_widths.size() != 3) invariant("refinement_widths", "must list [input, first block, second block]");
  for (int v : refinement_widths) {
    if (v < 1) invariant("refinement_widths", "entries must be at least 1");
  }
  if (refinement_widths.front() != residual_channels) invariant("refinement_widths", "must start at residual_channels");
  if (!(leaky_slope >= 0.0) || !std::isfinite(leaky_slope)) invariant("leaky_slope", "must be non-negative");
  if (!(demod_epsilon > 0.0) || !std::isfinite(demod_epsilon)) invariant("demod_epsilon", "must be positive");
}

std::uint64_t GeneratorWeights::parameter_count() const {
  std::uint64_t total = 0;
  visit_layers(*this, [&](const std::string&, const AffineLayer& layer) { total += layer.weight.size() + layer.bias.size(); });
  visit_fourier(*this, [&](const std::string&, const std::vector<float>& v) { total += v.size(); });
  return total;
}

GeneratorWeights init_weights(const GeneratorConfig& config, std::uint64_t seed) {
  config.validate();
  GeneratorWeights w = skeleton(config);
  Rng rng(derive_seed(seed, kWeightStream));
  visit_layers(w, [&](const std::string&, AffineLayer& layer) {
    layer.weight = rng.normal_vector<float>(layer.weight.size());
  });
  w.fourier = init_fourier(config.fourier_channels, config.thickness, config.fourier_sigma, rng);
  return w;
}

void validate_weights(const GeneratorWeights& weights, const GeneratorConfig& config) {
  config.validate();
  const GeneratorWeights shape = skeleton(config);
  std::vector<std::pair<std::string, std::pair<int, int>>> expected;
  visit_layers(shape, [&](const std::string& name, const AffineLayer& l) { expected.push_back({name, {l.in, l.out}}); });
  std::size_t index = 0;
  bool ok = weights.mapping.size() == shape.mapping.size() && weights.blocks.size() == shape.blocks.size() &&
            weights.projections.size() == shape.projections.size() &&
            weights.decoders.size() == shape.decoders.size();
  for (std::size_t l = 0; ok && l < weights.decoders.size(); ++l) {
    ok = weights.decoders[l].layers.size() == shape.decoders[l].layers.size();
  }
  if (!ok) throw Error(ErrorCode::kShapeMismatch, "generator weights have a different layer structure than the config");
  visit_layers(weights, [&](const std::string& name, const AffineLayer& l) {
    const auto& [in, out] = expected[index++].second;
    if (l.in != in || l.out != out || l.weight.size() != static_cast<std::size_t>(in) * out ||
        l.bias.size() != static_cast<std::size_t>(out)) {
      throw Error(ErrorCode::kShapeMismatch, "layer '" + name + "' does not match the config");
    }
  });
  weights.fourier.validate(config.fourier_channels, config.thickness);
}

Latent latent_from_seed(std::uint64_t seed, int latent_dim) {
  if (latent_dim < 1) throw Error(ErrorCode::kInvalidArgument, "latent_dim must be at least 1");
  Rng rng(derive_seed(seed, kLatentStream));
  return rng.normal_vector<float>(static_cast<std::size_t>(latent_dim));
}

StyleVector map_latent(std::span<const float> z, const GeneratorWeights& weights, const GeneratorConfig& config) {
  if (z.size() != static_cast<std::size_t>(config.latent_dim)) {
    throw Error(ErrorCode::kShapeMismatch, "latent length " + std::to_string(z.size()) + " differs from latent_dim " +
                                               std::to_string(config.latent_dim));
  }
  if (weights.mapping.size() != static_cast<std::size_t>(config.mapping_layers)) {
    throw Error(ErrorCode::kShapeMismatch, "mapping network depth differs from mapping_layers");
  }
  float sumsq = 0.0f;
  for (float v : z) sumsq += v * v;
  const float inv_rms = 1.0f / std::sqrt(sumsq / static_cast<float>(z.size()) + 1e-8f);
  std::vector<float> x(z.begin(), z.end());
  for (auto& v : x) v *= inv_rms;
  const auto slope = static_cast<float>(config.leaky_slope);
  for (const AffineLayer& layer : weights.mapping) {
    x = affine_vector(layer.view(), std::span<const float>(x));
    for (auto& v : x) v = leaky_relu(v, slope);
  }
  return StyleVector{std::move(x)};
}

FeatureMap<float> synthesis_block(const FeatureMap<float>& input, const StyleVector& w,
                                  const SynthesisBlockWeights& block, const GeneratorConfig& config) {
  check_style(w, config);
  if (input.channels != block.first.conv.in || input.data.size() != static_cast<std::size_t>(input.channels) * input.pixels()) {
    throw Error(ErrorCode::kShapeMismatch, "synthesis block input channels differ from the block fan-in");
  }
  TrackedBuffer<float> x(input.data, nullptr);
  TrackedBuffer<float> y = run_block(block, w, std::move(x), input.pixels(), config, nullptr);
  FeatureMap<float> out;
  out.channels = block.second.conv.out;
  out.height = input.height;
  out.width = input.width;
  out.data = y.release_storage();
  return out;
}

BilineFeature<float> synthesis_block(const BilineFeature<float>& input, const StyleVector& w,
                                     const SynthesisBlockWeights& block, const GeneratorConfig& config) {
  check_style(w, config);
  input.validate();
  if (input.channels != block.first.conv.in) {
    throw Error(ErrorCode::kShapeMismatch, "synthesis block input channels differ from the block fan-in");
  }
  BilineFeature<float> out;
  out.channels = block.second.conv.out;
  out.height = input.height;
  out.width = input.width;
  out.thickness = input.thickness;
  const auto rows = static_cast<std::size_t>(input.height) * input.thickness;
  const auto cols = static_cast<std::size_t>(input.width) * input.thickness;
  out.row_half = run_block(block, w, TrackedBuffer<float>(input.row_half, nullptr), rows, config, nullptr).release_storage();
  out.col_half = run_block(block, w, TrackedBuffer<float>(input.col_half, nullptr), cols, config, nullptr).release_storage();
  return out;
}

FeatureMap<float> synthesize(std::span<const float> z, const CoordVector& e_r, const CoordVector& e_c,
                             const GeneratorWeights& weights, const GeneratorConfig& config) {
  const StyleVector w = map_latent(z, weights, config);
  return synthesize_styled(w, e_r.values, e_c.values, weights, config);
}

FeatureMap<float> synthesize_styled(const StyleVector& w, std::span<const double> e_r, std::span<const double> e_c,
                                    const GeneratorWeights& weights, const GeneratorConfig& config,
                                    const SynthesisOptions& options) {
  if (config.mode != Mode::kBiline) throw Error(ErrorCode::kInvalidArgument, "synthesize requires mode=biline");
  validate_weights(weights, config);
  check_style(w, config);
  if (e_r.empty() || e_c.empty()) throw Error(ErrorCode::kInvalidArgument, "coordinate vectors must be non-empty");

  ActivationMeter* meter = options.meter;
  const int height = static_cast<int>(e_r.size());
  const int width = static_cast<int>(e_c.size());
  const int thickness = config.thickness;
  const int residual = config.residual_channels;
  const std::size_t row_locations = e_r.size() * static_cast<std::size_t>(thickness);
  const std::size_t col_locations = e_c.size() * static_cast<std::size_t>(thickness);
  const std::size_t pixels = e_r.size() * e_c.size();

  TrackedBuffer<float> row_half(fourier_encode<float>(e_r, weights.fourier.row), meter);
  TrackedBuffer<float> col_half(fourier_encode<float>(e_c, weights.fourier.column), meter);
  TrackedBuffer<float> fused;
  const float half_gain = projection_half_gain(thickness);

  for (int l = 0; l < config.num_blocks; ++l) {
    const auto& block = weights.blocks[static_cast<std::size_t>(l)];
    row_half = run_block(block, w, std::move(row_half), row_locations, config, meter);
    col_half = run_block(block, w, std::move(col_half), col_locations, config, meter);

    const auto& projection = weights.projections[static_cast<std::size_t>(l)];
    TrackedBuffer<float> f_row =
        modulated_apply(projection, w, row_half, row_locations, false, Activation::kLinear, config, meter);
    TrackedBuffer<float> f_col =
        modulated_apply(projection, w, col_half, col_locations, false, Activation::kLinear, config, meter);
    scale_in_place(f_row, half_gain);
    scale_in_place(f_col, half_gain);
    TrackedBuffer<float> composed(static_cast<std::size_t>(residual) * pixels, meter);
    compose_into<float>(f_row.span(), f_col.span(), residual, height, width, thickness, composed.span());
    f_row.reset();
    f_col.reset();
    if (options.trace) options.trace->composed.push_back(as_map(composed, residual, height, width));

    if (l == 0) {
      fused = std::move(composed);
    } else {
      fused = run_decoder(weights.decoders[static_cast<std::size_t>(l - 1)], std::move(fused), pixels, config, meter);
      float* dst = fused.data();
      const float* src = composed.data();
      for (std::size_t k = 0; k < fused.size(); ++k) dst[k] += src[k];
      composed.reset();
    }
    if (options.trace) options.trace->fused.push_back(as_map(fused, residual, height, width));
  }
  row_half.reset();
  col_half.reset();

  fused = run_decoder(weights.decoders.back(), std::move(fused), pixels, config, meter);
  if (options.trace) options.trace->final_map = as_map(fused, residual, height, width);
  return run_refinement(weights.refinement, w, std::move(fused), height, width, config, meter);
}

float projection_half_gain(int thickness) {
  if (thickness < 1) throw Error(ErrorCode::kInvalidArgument, "thickness must be at least 1");
  return static_cast<float>(1.0 / std::sqrt(static_cast<double>(thickness)));
}

std::vector<float> dense_fourier_input(const CoordField& field, const FourierParams& fourier, int fourier_channels) {
  field.validate();
  const FourierAxis& row = fourier.row;
  const FourierAxis& col = fourier.column;
  if (row.channels != fourier_channels || col.channels != fourier_channels) {
    throw Error(ErrorCode::kShapeMismatch, "fourier parameters do not match fourier_channels");
  }
  const int row_channels = (fourier_channels + 1) / 2;
  const std::size_t pixels = field.rows.size();
  std::vector<float> out(static_cast<std::size_t>(fourier_channels) * pixels);
  auto slot0 = [](const FourierAxis& axis, int k) {
    FourierAxis single;
    single.channels = 1;
    single.thickness = 1;
    single.frequencies = {axis.frequencies[static_cast<std::size_t>(k) * axis.thickness]};
    single.phases = {axis.phases[static_cast<std::size_t>(k) * axis.thickness]};
    return single;
  };
  for (int k = 0; k < fourier_channels; ++k) {
    const bool from_row = k < row_channels;
    const FourierAxis single = from_row ? slot0(row, k) : slot0(col, k - row_channels);
    const std::vector<float> enc = fourier_encode<float>(from_row ? field.rows : field.cols, single);
    std::copy(enc.begin(), enc.end(), out.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(k) * pixels));
  }
  return out;
}

FeatureMap<float> synthesize_dense(std::span<const float> z, const CoordField& field,
                                   const GeneratorWeights& weights, const GeneratorConfig& config) {
  const StyleVector w = map_latent(z, weights, config);
  return synthesize_dense_styled(w, field, weights, config);
}

FeatureMap<float> synthesize_dense_styled(const StyleVector& w, const CoordField& field,
                                          const GeneratorWeights& weights, const GeneratorConfig& config,
                                          const SynthesisOptions& options) {
  if (config.mode != Mode::kDense) throw Error(ErrorCode::kInvalidArgument, "synthesize_dense requires mode=dense");
  validate_weights(weights, config);
  check_style(w, config);
  field.validate();

  ActivationMeter* meter = options.meter;
  const std::size_t pixels = field.rows.size();
  const int residual = config.residual_channels;

  TrackedBuffer<float> x(dense_fourier_input(field, weights.fourier, config.fourier_channels), meter);
  TrackedBuffer<float> fused;
  for (int l = 0; l < config.num_blocks; ++l) {
    x = run_block(weights.blocks[static_cast<std::size_t>(l)], w, std::move(x), pixels, config, meter);
    TrackedBuffer<float> residual_map = modulated_apply(weights.projections[static_cast<std::size_t>(l)], w, x, pixels,
                                                        false, Activation::kLinear, config, meter);
    if (options.trace) options.trace->composed.push_back(as_map(residual_map, residual, field.height, field.width));
    if (l == 0) {
      fused = std::move(residual_map);
    } else {
      float* dst = fused.data();
      const float* src = residual_map.data();
      for (std::size_t k = 0; k < fused.size(); ++k) dst[k] += src[k];
      residual_map.reset();
    }
    if (options.trace) options.trace->fused.push_back(as_map(fused, residual, field.height, field.width));
  }
  x.reset();
  if (options.trace) options.trace->final_map = as_map(fused, residual, field.height, field.width);
  return run_refinement(weights.refinement, w, std::move(fused), field.height, field.width, config, meter);
}

std::vector<WeightEntry> to_entries(const GeneratorWeights& weights) {
  std::vector<WeightEntry> entries;
  visit_layers(weights, [&](const std::string& name, const AffineLayer& l) {
    entries.push_back({name + ".weight", {static_cast<std::uint32_t>(l.out), static_cast<std::uint32_t>(l.in)}, l.weight});
    entries.push_back({name + ".bias", {static_cast<std::uint32_t>(l.out)}, l.bias});
  });
  const auto dims = std::vector<std::uint32_t>{static_cast<std::uint32_t>(weights.fourier.row.channels),
                                               static_cast<std::uint32_t>(weights.fourier.row.thickness)};
  visit_fourier(weights, [&](const std::string& name, const std::vector<float>& v) { entries.push_back({name, dims, v}); });
  return entries;
}

GeneratorWeights from_entries(std::span<const WeightEntry> entries, const GeneratorConfig& config) {
  GeneratorWeights w = skeleton(config);
  std::map<std::string, const WeightEntry*> by_name;
  for (const WeightEntry& e : entries) {
    if (!by_name.emplace(e.name, &e).second) throw Error(ErrorCode::kDuplicateName, "duplicate weight entry '" + e.name + "'");
  }
  std::size_t used = 0;
  auto take = [&](const std::string& name, const std::vector<std::uint32_t>& dims, std::vector<float>& dst) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw Error(ErrorCode::kShapeMismatch, "weight entry '" + name + "' is missing");
    if (it->second->dims != dims || it->second->data.size() != dst.size()) {
      throw Error(ErrorCode::kShapeMismatch, "weight entry '" + name + "' has the wrong shape for this config");
    }
    dst = it->second->data;
    ++used;
  };
  visit_layers(w, [&](const std::string& name, AffineLayer& l) {
    take(name + ".weight", {static_cast<std::uint32_t>(l.out), static_cast<std::uint32_t>(l.in)}, l.weight);
    take(name + ".bias", {static_cast<std::uint32_t>(l.out)}, l.bias);
  });
  const auto dims = std::vector<std::uint32_t>{static_cast<std::uint32_t>(config.fourier_channels),
                                               static_cast<std::uint32_t>(config.thickness)};
  visit_fourier(w, [&](const std::string& name, std::vector<float>& v) { take(name, dims, v); });
  if (used != entries.size()) throw Error(ErrorCode::kShapeMismatch, "weight container has entries this config does not use");
  return w;
}

}  // namespace creps
