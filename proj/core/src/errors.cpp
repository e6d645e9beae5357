// Copyright 2026 The tomocs Authors
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
#include "tomocs/errors.hpp"

namespace tomocs {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::kInvalidGate: return "invalid-gate";
    case ErrorCode::kUnknownGate: return "unknown-gate";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kBasisMismatch: return "basis-mismatch";
    case ErrorCode::kNonphysicalInput: return "nonphysical-input";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace tomocs
