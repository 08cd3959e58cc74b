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

#include "creps/biline.hpp"

namespace creps {

double storage_ratio(int thickness, int height, int width) {
  if (thickness < 1 || height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "storage_ratio needs positive thickness and resolution");
  }
  return static_cast<double>(thickness) * (static_cast<double>(height) + width) /
         (static_cast<double>(height) * width);
}

template struct FeatureMap<float>;
template struct FeatureMap<double>;
template struct BilineFeature<float>;
template struct BilineFeature<double>;

}  // namespace creps
