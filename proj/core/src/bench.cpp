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

#include "creps/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "creps/error.hpp"
#include "creps/parallel.hpp"

namespace creps {
namespace {

// Replays the generator's allocate/release order with closed-form sizes.
class Schedule {
 public:
  void acquire(std::uint64_t n) {
    live_ += n;
    total_ += n;
    peak_ = std::max(peak_, live_);
  }
  void release(std::uint64_t n) { live_ -= n; }

  std::uint64_t peak() const { return peak_; }
  std::uint64_t total() const { return total_; }

 private:
  std::uint64_t live_ = 0, peak_ = 0, total_ = 0;
};

using u64 = std::uint64_t;

void block(Schedule& s, u64 in, u64 hidden, u64 locations) {
  s.acquire(hidden * locations);
  s.release(in * locations);
  s.acquire(hidden * locations);
  s.release(hidden * locations);
}

void decoder(Schedule& s, const std::vector<int>& widths, u64 pixels) {
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    s.acquire(static_cast<u64>(widths[k + 1]) * pixels);
    s.release(static_cast<u64>(widths[k]) * pixels);
  }
}

void refinement(Schedule& s, const std::vector<int>& r, u64 pixels) {
  const u64 in = static_cast<u64>(r[0]) * pixels, a = static_cast<u64>(r[1]) * pixels,
            b = static_cast<u64>(r[2]) * pixels, rgb = 3 * pixels;
  s.acquire(a);  // h1
  s.release(in);
  s.acquire(a);  // x1
  s.release(a);
  s.acquire(rgb);
  s.acquire(b);  // h2
  s.release(a);
  s.acquire(b);  // x2
  s.release(b);
  s.acquire(rgb);
  s.release(b);
  s.release(rgb);
  s.release(rgb);
}

}  // namespace

ActivationCount count_activations(const GeneratorConfig& config, Mode mode, int height, int width) {
  config.validate();
  if (height < 1 || width < 1) throw Error(ErrorCode::kInvalidArgument, "resolution must be at least 1x1");
  const u64 fourier = static_cast<u64>(config.fourier_channels);
  const u64 hidden = static_cast<u64>(config.hidden_channels);
  const u64 residual = static_cast<u64>(config.residual_channels);
  const u64 blocks = static_cast<u64>(config.num_blocks);
  const u64 pixels = static_cast<u64>(height) * static_cast<u64>(width);
  const u64 row_loc = static_cast<u64>(height) * static_cast<u64>(config.thickness);
  const u64 col_loc = static_cast<u64>(width) * static_cast<u64>(config.thickness);

  ActivationCount count;
  const u64 per_location = fourier + blocks * (2 * hidden + residual);
  count.trunk = per_location * (mode == Mode::kBiline ? row_loc + col_loc : pixels);

  Schedule s;
  if (mode == Mode::kBiline) {
    s.acquire(fourier * row_loc);
    s.acquire(fourier * col_loc);
    for (u64 l = 0; l < blocks; ++l) {
      const u64 in = l == 0 ? fourier : hidden;
      block(s, in, hidden, row_loc);
      block(s, in, hidden, col_loc);
      s.acquire(residual * row_loc);
      s.acquire(residual * col_loc);
      s.acquire(residual * pixels);
      s.release(residual * row_loc);
      s.release(residual * col_loc);
      if (l > 0) {
        decoder(s, config.decoder_widths, pixels);
        s.release(residual * pixels);
      }
    }
    s.release(hidden * row_loc);
    s.release(hidden * col_loc);
    decoder(s, config.decoder_widths, pixels);
  } else {
    s.acquire(fourier * pixels);
    for (u64 l = 0; l < blocks; ++l) {
      block(s, l == 0 ? fourier : hidden, hidden, pixels);
      s.acquire(residual * pixels);
      if (l > 0) s.release(residual * pixels);
    }
    s.release(hidden * pixels);
  }
  refinement(s, config.refinement_widths, pixels);
  count.peak = s.peak();
  count.total = s.total();
  return count;
}

BenchReport run_bench(const GeneratorConfig& config, const BenchOptions& options) {
  if (options.repeats < 3) throw Error(ErrorCode::kInvalidArgument, "bench needs at least 3 repeats");
  BenchReport report;
  report.threads = num_threads();
  GeneratorConfig mode_config = config;
  const GeneratorWeights weights = init_weights(config, options.seed);
  const std::uint64_t params = weights.parameter_count();

  for (Mode mode : options.modes) {
    mode_config.mode = mode;
    for (int res : options.resolutions) {
      for (int batch : options.batches) {
        if (res < 1 || batch < 1) throw Error(ErrorCode::kInvalidArgument, "bench resolutions and batches must be positive");
        BenchRow row;
        row.mode = mode;
        row.height = row.width = res;
        row.batch = batch;
        row.parameter_count = params;
        row.activation_elements = count_activations(mode_config, mode, res, res).peak * static_cast<u64>(batch);
        row.bytes_estimate = row.activation_elements * sizeof(float);
        if (row.bytes_estimate > options.memory_budget_bytes) {
          row.out_of_memory = true;
          report.rows.push_back(row);
          continue;
        }
        std::vector<StyleVector> styles;
        for (int b = 0; b < batch; ++b) {
          styles.push_back(map_latent(latent_from_seed(options.seed + static_cast<u64>(b), config.latent_dim), weights, mode_config));
        }
        const CoordVector e = grid_coords(res, Transform{}, Axis::kRow);
        const CoordField field = mode == Mode::kDense ? default_field(res, res) : CoordField{};
        auto run_once = [&] {
          for (const StyleVector& w : styles) {
            if (mode == Mode::kBiline) {
              (void)synthesize_styled(w, e.values, e.values, weights, mode_config);
            } else {
              (void)synthesize_dense_styled(w, field, weights, mode_config);
            }
          }
        };
        run_once();  // warm-up
        std::vector<double> times;
        for (int r = 0; r < options.repeats; ++r) {
          const auto start = std::chrono::steady_clock::now();
          run_once();
          times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        std::sort(times.begin(), times.end());
        row.time_s_median = times[times.size() / 2];
        row.repeats = options.repeats;
        row.throughput = static_cast<double>(res) * res * batch / row.time_s_median;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

std::string format_report(const BenchReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-7s %6s %5s %10s %14s %12s %12s %14s\n", "mode", "res", "batch", "params",
                "activations", "est_MiB", "median_s", "pixels/s");
  out << line;
  for (const BenchRow& r : report.rows) {
    const std::string res = std::to_string(r.height) + "x" + std::to_string(r.width);
    if (r.out_of_memory) {
      std::snprintf(line, sizeof(line), "%-7s %6s %5d %10llu %14llu %12.1f %12s %14s\n",
                    std::string(to_string(r.mode)).c_str(), res.c_str(), r.batch,
                    static_cast<unsigned long long>(r.parameter_count),
                    static_cast<unsigned long long>(r.activation_elements), r.bytes_estimate / 1048576.0, "OOM", "OOM");
    } else {
      std::snprintf(line, sizeof(line), "%-7s %6s %5d %10llu %14llu %12.1f %12.4f %14.0f\n",
                    std::string(to_string(r.mode)).c_str(), res.c_str(), r.batch,
                    static_cast<unsigned long long>(r.parameter_count),
                    static_cast<unsigned long long>(r.activation_elements), r.bytes_estimate / 1048576.0,
                    r.time_s_median, r.throughput);
    }
    out << line;
  }
  out << "threads: " << report.threads << "\n";
  return out.str();
}

std::string report_to_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    rows.push_back({
        {"mode", std::string(to_string(r.mode))},
        {"H", r.height},
        {"W", r.width},
        {"batch", r.batch},
        {"params", r.parameter_count},
        {"activation_elements", r.activation_elements},
        {"bytes_est", r.bytes_estimate},
        {"time_s_median", r.out_of_memory ? nlohmann::json(nullptr) : nlohmann::json(r.time_s_median)},
        {"repeats", r.repeats},
        {"throughput", r.out_of_memory ? nlohmann::json(nullptr) : nlohmann::json(r.throughput)},
        {"oom", r.out_of_memory},
        {"threads", report.threads},
    });
  }
  return rows.dump(2) + "\n";
}

}  // namespace creps
