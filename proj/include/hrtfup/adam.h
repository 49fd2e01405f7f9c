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

#ifndef HRTFUP_ADAM_H_
#define HRTFUP_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hrtfup/autodiff.h"
#include "hrtfup/tensor.h"

namespace hrtfup::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::int64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  // Zero moments shaped like params.
  static AdamState For(std::span<Parameter* const> params);
};

// One bias-corrected Adam update from each parameter's grad. Throws
// Error(kShapeMismatch) if the state or a gradient does not match.
void AdamStep(std::span<Parameter* const> params, AdamState& state, const AdamConfig& cfg);

}  // namespace hrtfup::nn

#endif  // HRTFUP_ADAM_H_
