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
#include <string>
#include <vector>

#include "creps/generator.hpp"

namespace creps {

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Oracle suite run by `creps selftest`: compose brute force, gradient check,
// subset purity, tiling equality and warp-vs-pixelwise. Uses small
// resolutions so that it finishes in seconds at the default config.
std::vector<SelfTestCheck> run_selftest(const GeneratorConfig& config, std::uint64_t seed);

}  // namespace creps
