// Copyright 2026 The hrtfup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hrtfup/error.h"

namespace hrtfup {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroRadius: return "ZeroRadius";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kUnsupportedRatio: return "UnsupportedRatio";
    case ErrorCode::kMissingDesignFile: return "MissingDesignFile";
    case ErrorCode::kNotPerfectSquare: return "NotPerfectSquare";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonScalarLoss: return "NonScalarLoss";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace hrtfup
