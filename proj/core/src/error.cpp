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

#include "creps/error.hpp"

namespace creps {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kDuplicateName: return "duplicate-name";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kTrailingData: return "trailing-data";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kUnknownKey: return "unknown-key";
    case ErrorCode::kInvariant: return "invariant-violation";
    case ErrorCode::kFormat: return "format-error";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kNumeric: return "numeric-failure";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

}  // namespace creps
