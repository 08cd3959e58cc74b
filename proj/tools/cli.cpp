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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <regex>

#include <CLI11.hpp>

#include "creps/bench.hpp"
#include "creps/error.hpp"
#include "creps/fitter.hpp"
#include "creps/generator.hpp"
#include "creps/parallel.hpp"
#include "creps/persistence.hpp"
#include "creps/renderer.hpp"
#include "creps/rng.hpp"
#include "creps/selftest.hpp"

namespace creps::cli {
namespace {

struct Resolution {
  int height = 0;
  int width = 0;
};

Resolution parse_resolution(const std::string& text) {
  static const std::regex pattern(R"((\d{1,6})x(\d{1,6}))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must look like HxW, got '" + text + "'");
  }
  Resolution r{std::stoi(m[1]), std::stoi(m[2])};
  if (r.height < 1 || r.width < 1) throw Error(ErrorCode::kInvalidArgument, "resolution must be at least 1x1, got " + text);
  return r;
}

int parse_threads(const std::string& text) {
  if (text == "max") return 0;
  static const std::regex pattern(R"(\d{1,4})");
  if (!std::regex_match(text, pattern)) throw Error(ErrorCode::kInvalidArgument, "--threads takes a count or 'max'");
  return std::stoi(text);
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kBudgetExceeded:
      return kExitUsage;
    case ErrorCode::kNumeric:
      return kExitNumeric;
    default:
      return kExitIo;
  }
}

struct Common {
  std::string config_path;
  std::string weights_path;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "generator config (JSON); defaults when absent");
  cmd->add_option("--weights", c.weights_path, "weight container; initialized from --seed when absent");
  cmd->add_option("--seed", c.seed, "seed for weight init and the latent");
}

GeneratorConfig load_config_or_default(const Common& c) {
  return c.config_path.empty() ? GeneratorConfig{} : load_config(c.config_path);
}

GeneratorWeights load_weights_or_init(const Common& c, const GeneratorConfig& config) {
  if (c.weights_path.empty()) return init_weights(config, c.seed);
  const auto entries = load_container(c.weights_path);
  return from_entries(entries, config);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// Smooth seeded displacement: a sum of four random plane waves per axis.
Elastic elastic_field(int height, int width, double amplitude, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 7));
  const CoordField grid = default_field(height, width);
  Elastic e;
  for (auto* disp : {&e.row_displacement, &e.col_displacement}) {
    disp->assign(grid.rows.size(), 0.0);
    for (int wave = 0; wave < 4; ++wave) {
      const double fr = rng.uniform(-1.5, 1.5), fc = rng.uniform(-1.5, 1.5), phase = rng.uniform();
      for (std::size_t k = 0; k < grid.rows.size(); ++k) {
        (*disp)[k] += 0.5 * amplitude * std::sin(2.0 * std::numbers::pi * (fr * grid.rows[k] + fc * grid.cols[k] + phase));
      }
    }
  }
  return e;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"creps: bi-line coordinate image generator toolkit", "creps"};
  app.require_subcommand(1);
  std::string threads = "max";
  app.add_option("--threads", threads, "worker threads, a count or 'max'")->capture_default_str();

  // generate / tile
  Common gen;
  std::string res_text, out_path;
  Transform transform;
  int tile = 0;
  auto add_render_flags = [&](CLI::App* cmd) {
    add_common(cmd, gen);
    cmd->add_option("--res", res_text, "output resolution HxW")->required();
    cmd->add_option("--scale", transform.scale, "coordinate scale (>1 zooms out)");
    cmd->add_option("--shift-x", transform.shift_col, "column coordinate shift");
    cmd->add_option("--shift-y", transform.shift_row, "row coordinate shift");
    cmd->add_option("--out", out_path, "output PPM")->required();
  };
  CLI::App* generate = app.add_subcommand("generate", "render one image");
  add_render_flags(generate);
  CLI::App* tile_cmd = app.add_subcommand("tile", "render an image tile by tile");
  add_render_flags(tile_cmd);
  tile_cmd->add_option("--tile", tile, "tile edge in pixels")->required();

  // warp
  Common warp_common;
  std::string warp_mode, field_path, warp_res, warp_out;
  double angle = 0.0, amplitude = 0.05;
  CLI::App* warp = app.add_subcommand("warp", "render through a per-pixel coordinate field");
  add_common(warp, warp_common);
  warp->add_option("--mode", warp_mode, "rotate, elastic or custom")
      ->required()
      ->check(CLI::IsMember({"rotate", "elastic", "custom"}));
  warp->add_option("--angle", angle, "rotation angle in radians");
  warp->add_option("--amplitude", amplitude, "elastic displacement amplitude");
  warp->add_option("--field", field_path, "CFLD0001 coordinate field (custom mode)");
  warp->add_option("--res", warp_res, "output resolution HxW (rotate and elastic)");
  warp->add_option("--out", warp_out, "output PPM")->required();

  // fit
  std::string image_path, emb_path, trace_path, optimizer = "adam";
  FitConfig fit_config;
  CLI::App* fit = app.add_subcommand("fit", "fit a thick bi-line to an image");
  fit->add_option("--image", image_path, "input PPM")->required();
  fit->add_option("--thickness", fit_config.thickness, "thickness D");
  fit->add_option("--iters", fit_config.iterations, "iterations");
  fit->add_option("--lr", fit_config.learning_rate, "learning rate");
  fit->add_option("--optimizer", optimizer, "adam or gd")->check(CLI::IsMember({"adam", "gd"}));
  fit->add_option("--seed", fit_config.seed, "init seed");
  fit->add_option("--out-embeddings", emb_path, "embedding container");
  fit->add_option("--out-trace", trace_path, "CSV MSE trace");

  // bench
  Common bench_common;
  BenchOptions bench_options;
  std::vector<std::string> bench_modes{"biline", "dense"};
  std::string json_path;
  double budget_mib = static_cast<double>(kDefaultMemoryBudget >> 20);
  CLI::App* bench = app.add_subcommand("bench", "time synthesis and count activations");
  bench->add_option("--config", bench_common.config_path, "generator config (JSON)");
  bench->add_option("--seed", bench_options.seed, "seed for weights and latents");
  bench->add_option("--resolutions", bench_options.resolutions, "square resolutions")->delimiter(',');
  bench->add_option("--batches", bench_options.batches, "batch sizes")->delimiter(',');
  bench->add_option("--modes", bench_modes, "biline and/or dense")->delimiter(',');
  bench->add_option("--repeats", bench_options.repeats, "timed repeats (>= 3)");
  bench->add_option("--budget-mib", budget_mib, "activation budget before a row is reported OOM");
  bench->add_option("--json", json_path, "write the report as JSON");

  // selftest
  Common self_common;
  CLI::App* selftest = app.add_subcommand("selftest", "run the oracle suite");
  selftest->add_option("--config", self_common.config_path, "generator config (JSON)");
  selftest->add_option("--seed", self_common.seed, "seed");

  // init-weights
  Common init_common;
  std::string init_out;
  CLI::App* init = app.add_subcommand("init-weights", "write seeded initial weights");
  init->add_option("--config", init_common.config_path, "generator config (JSON)");
  init->add_option("--seed", init_common.seed, "seed");
  init->add_option("--out", init_out, "weight container")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_num_threads(parse_threads(threads));

    if (generate->parsed() || tile_cmd->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      const Resolution res = parse_resolution(res_text);
      const GeneratorConfig config = load_config_or_default(gen);
      const GeneratorWeights weights = load_weights_or_init(gen, config);
      RenderRequest request;
      request.seed = gen.seed;
      request.height = res.height;
      request.width = res.width;
      request.transform = transform;
      Image8 image;
      if (tile_cmd->parsed()) {
        request.tile_size = tile;
        image = render_tiled(request, weights, config);
      } else {
        image = render(request, weights, config);
      }
      write_image(image, out_path);
      out << "wrote " << out_path << " (" << res.height << "x" << res.width << ", " << to_string(config.mode) << ") in "
          << fmt("%.3f", seconds_since(start)) << " s\n";
      return kExitOk;
    }

    if (warp->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      const GeneratorConfig config = load_config_or_default(warp_common);
      const GeneratorWeights weights = load_weights_or_init(warp_common, config);
      CoordField field;
      if (warp_mode == "custom") {
        if (field_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--mode custom needs --field");
        field = make_coord_field(CustomField{field_path}, 0, 0);
      } else {
        if (warp_res.empty()) throw Error(ErrorCode::kInvalidArgument, "--mode " + warp_mode + " needs --res");
        const Resolution res = parse_resolution(warp_res);
        field = warp_mode == "rotate"
                    ? make_coord_field(Rotation{angle}, res.height, res.width)
                    : make_coord_field(elastic_field(res.height, res.width, amplitude, warp_common.seed), res.height,
                                       res.width);
      }
      const Image8 image = render_warped(latent_from_seed(warp_common.seed, config.latent_dim), field, weights, config);
      write_image(image, warp_out);
      out << "wrote " << warp_out << " (" << field.height << "x" << field.width << ", " << warp_mode << ") in "
          << fmt("%.3f", seconds_since(start)) << " s\n";
      return kExitOk;
    }

    if (fit->parsed()) {
      fit_config.optimizer = optimizer == "gd" ? Optimizer::kGradientDescent : Optimizer::kAdam;
      const FeatureMap<double> image = read_image(image_path);
      const auto start = std::chrono::steady_clock::now();
      const FitResult result = fit_biline(image, fit_config);
      const double elapsed = seconds_since(start);
      out << "final_mse " << fmt("%.6e", result.final_mse) << "\n";
      if (fit_config.thickness <= std::min(image.height, image.width)) {
        double oracle = 0.0;
        for (int c = 0; c < image.channels; ++c) {
          const std::span<const double> channel(image.data.data() + static_cast<std::size_t>(c) * image.pixels(),
                                                image.pixels());
          oracle += svd_oracle_mse(channel, image.height, image.width, fit_config.thickness) / image.channels;
        }
        out << "oracle_mse " << fmt("%.6e", oracle) << "\n";
      }
      out << "storage_ratio " << fmt("%.6f", result.compression_ratio) << "\n";
      out << "fit_seconds " << fmt("%.3f", elapsed) << "\n";
      if (!emb_path.empty()) {
        const auto& e = result.embeddings;
        std::vector<WeightEntry> entries(2);
        entries[0].name = "fit.row";
        entries[0].dims = {static_cast<std::uint32_t>(e.channels), static_cast<std::uint32_t>(e.height),
                           static_cast<std::uint32_t>(e.thickness)};
        entries[0].data.assign(e.row_half.begin(), e.row_half.end());
        entries[1].name = "fit.col";
        entries[1].dims = {static_cast<std::uint32_t>(e.channels), static_cast<std::uint32_t>(e.width),
                           static_cast<std::uint32_t>(e.thickness)};
        entries[1].data.assign(e.col_half.begin(), e.col_half.end());
        save_container(entries, emb_path);
      }
      if (!trace_path.empty()) write_trace_csv(result.mse_trace, trace_path);
      return kExitOk;
    }

    if (bench->parsed()) {
      const GeneratorConfig config = load_config_or_default(bench_common);
      bench_options.modes.clear();
      for (const std::string& m : bench_modes) bench_options.modes.push_back(parse_mode(m));
      if (!(budget_mib > 0.0)) throw Error(ErrorCode::kInvalidArgument, "--budget-mib must be positive");
      bench_options.memory_budget_bytes = static_cast<std::uint64_t>(budget_mib * 1048576.0);
      const BenchReport report = run_bench(config, bench_options);
      out << format_report(report);
      if (!json_path.empty()) write_text(json_path, report_to_json(report));
      return kExitOk;
    }

    if (selftest->parsed()) {
      const GeneratorConfig config = load_config_or_default(self_common);
      bool all = true;
      for (const SelfTestCheck& check : run_selftest(config, self_common.seed)) {
        out << (check.passed ? "PASS " : "FAIL ") << check.name << " (" << check.detail << ")\n";
        all = all && check.passed;
      }
      return all ? kExitOk : kExitNumeric;
    }

    if (init->parsed()) {
      const GeneratorConfig config = load_config_or_default(init_common);
      const GeneratorWeights weights = init_weights(config, init_common.seed);
      save_container(to_entries(weights), init_out);
      out << "wrote " << init_out << " (" << weights.parameter_count() << " parameters)\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace creps::cli
