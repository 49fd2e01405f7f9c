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

#ifndef HRTFUP_ERROR_H_
#define HRTFUP_ERROR_H_

#include <stdexcept>
#include <string>

namespace hrtfup {

enum class ErrorCode {
  kZeroRadius,
  kDomainError,
  kSingularSystem,
  kUnsupportedRatio,
  kMissingDesignFile,
  kNotPerfectSquare,
  kDegenerateVariance,
  kFormatError,
  kShapeMismatch,
  kNonScalarLoss,
  kZeroNorm,
  kNonFiniteLoss,
  kIoError,
  kInvalidArgument,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported with this exception type; the code
// identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hrtfup

#endif  // HRTFUP_ERROR_H_
