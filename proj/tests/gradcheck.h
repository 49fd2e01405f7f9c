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

// Central finite-difference gradient checks.

#ifndef HRTFUP_TESTS_GRADCHECK_H_
#define HRTFUP_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hrtfup/autodiff.h"

namespace hrtfup::testing {

// Element-wise |analytic - numeric| / max(|analytic|, |numeric|, floor) with
// floor = 1e-4 * the largest numeric entry of the tensor, so exactly-zero
// gradients are compared on the scale of their neighbours.
inline double RelativeError(const nn::Tensor& analytic, const std::vector<double>& numeric) {
  double scale = 0.0;
  for (double v : numeric) scale = std::max(scale, std::abs(v));
  const double floor = std::max(1e-4 * scale, 1e-12);
  double worst = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

using LossBuilder = std::function<nn::Var(nn::Tape&, const std::vector<nn::Var>&)>;

// Worst relative error over every input element.
inline double GradCheck(std::vector<nn::Tensor> inputs, const LossBuilder& build, double h = 1e-6) {
  std::vector<nn::Tensor> analytic;
  {
    nn::Tape tape;
    std::vector<nn::Var> vars;
    for (const nn::Tensor& t : inputs) vars.push_back(tape.Input(t));
    nn::Var loss = build(tape, vars);
    tape.Backward(loss);
    for (nn::Var v : vars) analytic.push_back(tape.grad(v));
  }
  auto evaluate = [&] {
    nn::Tape tape;
    std::vector<nn::Var> vars;
    for (const nn::Tensor& t : inputs) vars.push_back(tape.Constant(t));
    return build(tape, vars).value().item();
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    std::vector<double> numeric(inputs[k].size());
    for (std::size_t i = 0; i < inputs[k].size(); ++i) {
      const double saved = inputs[k][i];
      inputs[k][i] = saved + h;
      const double up = evaluate();
      inputs[k][i] = saved - h;
      const double down = evaluate();
      inputs[k][i] = saved;
      numeric[i] = (up - down) / (2 * h);
    }
    worst = std::max(worst, RelativeError(analytic[k], numeric));
  }
  return worst;
}

}  // namespace hrtfup::testing

#endif  // HRTFUP_TESTS_GRADCHECK_H_
