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
#include <functional>

namespace creps {

// Caps the number of worker threads used by parallel_for. Zero selects the
// hardware concurrency. Results never depend on this value: every kernel
// assigns each output element to exactly one worker and reduces in a fixed
// order.
void set_num_threads(int threads);
int num_threads();

// Splits [0, count) into contiguous chunks of at least `grain` items and runs
// `body(begin, end)` on each. Nested calls from inside a worker run inline.
void parallel_for(std::size_t count, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace creps
