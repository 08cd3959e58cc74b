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
#include <string_view>
#include <vector>

#include "creps/activation_meter.hpp"
#include "creps/biline.hpp"
#include "creps/coords.hpp"
#include "creps/layers.hpp"
#include "creps/persistence.hpp"

namespace creps {

enum class Mode { kBiline, kDense };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

// Defaults are the desk-scale generator: six blocks (the 256-target depth),
// a 128-wide trunk, 32-channel residual bi-lines of thickness 8.
struct GeneratorConfig {
  int latent_dim = 64;
  int style_dim = 64;
  int mapping_layers = 2;
  int num_blocks = 6;
  int hidden_channels = 128;
  int residual_channels = 32;
  int thickness = 8;
  int fourier_channels = 64;
  double fourier_sigma = 8.0;
  std::vector<int> decoder_widths{32, 64, 128, 64, 32};
  std::vector<int> refinement_widths{32, 128, 64};
  double leaky_slope = 0.2;
  double demod_epsilon = 1e-8;
  Mode mode = Mode::kBiline;

  // Throws kInvariant naming the offending field.
  void validate() const;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

struct AffineLayer {
  int in = 0;
  int out = 0;
  std::vector<float> weight;  // [out x in], N(0, 1)
  std::vector<float> bias;    // [out]

  AffineView<float> view() const { return {in, out, weight, bias}; }
};

struct ModulatedLayer {
  AffineLayer style;  // style_dim -> conv.in
  AffineLayer conv;   // conv.in -> conv.out

  ModulatedView<float> view() const { return {style.view(), conv.view()}; }
};

struct SynthesisBlockWeights {
  ModulatedLayer first;
  ModulatedLayer second;
};

struct DecoderWeights {
  std::vector<AffineLayer> layers;
};

struct RefinementWeights {
  SynthesisBlockWeights block_a;
  ModulatedLayer to_rgb_a;
  SynthesisBlockWeights block_b;
  ModulatedLayer to_rgb_b;
};

struct GeneratorWeights {
  std::vector<AffineLayer> mapping;
  FourierParams fourier;
  std::vector<SynthesisBlockWeights> blocks;
  std::vector<ModulatedLayer> projections;
  std::vector<DecoderWeights> decoders;
  RefinementWeights refinement;

  std::uint64_t parameter_count() const;
};

struct StyleVector {
  std::vector<float> w;
};

using Latent = std::vector<float>;

// Deterministic in (config, seed). Affine weights ~ N(0, 1), biases zero,
// Fourier parameters per init_fourier.
GeneratorWeights init_weights(const GeneratorConfig& config, std::uint64_t seed);

// Throws kShapeMismatch when any tensor disagrees with the config.
void validate_weights(const GeneratorWeights& weights, const GeneratorConfig& config);

// z ~ N(0, 1) drawn from a stream independent of the weight stream.
Latent latent_from_seed(std::uint64_t seed, int latent_dim);

// RMS-normalizes z, then mapping_layers x (affine + LeakyReLU).
StyleVector map_latent(std::span<const float> z, const GeneratorWeights& weights, const GeneratorConfig& config);

// Two demodulated, activated modulated layers at every location; for a
// bi-line the locations are (position, thickness slot) of both halves.
FeatureMap<float> synthesis_block(const FeatureMap<float>& input, const StyleVector& w,
                                  const SynthesisBlockWeights& block, const GeneratorConfig& config);
BilineFeature<float> synthesis_block(const BilineFeature<float>& input, const StyleVector& w,
                                     const SynthesisBlockWeights& block, const GeneratorConfig& config);

// Intermediate maps of one synthesis run: composed F^(l), fused E^(l) and
// the final fused map handed to the refinement block.
struct FeatureTrace {
  std::vector<FeatureMap<float>> composed;
  std::vector<FeatureMap<float>> fused;
  FeatureMap<float> final_map;
};

struct SynthesisOptions {
  ActivationMeter* meter = nullptr;
  FeatureTrace* trace = nullptr;
};

// Use-time gain 1/sqrt(D) on each projected half, so that the composed map
// is the thickness mean of the per-slot products and keeps the scale of a
// single projection.
float projection_half_gain(int thickness);

// Bi-line pipeline, image [3 x |e_r| x |e_c|], unclamped.
FeatureMap<float> synthesize(std::span<const float> z, const CoordVector& e_r, const CoordVector& e_c,
                             const GeneratorWeights& weights, const GeneratorConfig& config);
FeatureMap<float> synthesize_styled(const StyleVector& w, std::span<const double> e_r, std::span<const double> e_c,
                                    const GeneratorWeights& weights, const GeneratorConfig& config,
                                    const SynthesisOptions& options = {});

// Dense no-bi-line baseline over an arbitrary per-pixel coordinate field.
FeatureMap<float> synthesize_dense(std::span<const float> z, const CoordField& field,
                                   const GeneratorWeights& weights, const GeneratorConfig& config);
FeatureMap<float> synthesize_dense_styled(const StyleVector& w, const CoordField& field,
                                          const GeneratorWeights& weights, const GeneratorConfig& config,
                                          const SynthesisOptions& options = {});

// Dense-mode Fourier input [fourier_channels x pixels]: the first
// ceil(C_f / 2) channels encode r_ij with the row set, the rest encode c_ij
// with the column set, both at thickness slot 0.
std::vector<float> dense_fourier_input(const CoordField& field, const FourierParams& fourier, int fourier_channels);

std::vector<WeightEntry> to_entries(const GeneratorWeights& weights);
GeneratorWeights from_entries(std::span<const WeightEntry> entries, const GeneratorConfig& config);

}  // namespace creps
