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

#ifndef HRTFUP_AUTODIFF_H_
#define HRTFUP_AUTODIFF_H_

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hrtfup/tensor.h"

namespace hrtfup::nn {

// A trainable leaf. Backward() adds into grad; callers zero it between steps.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
  void ZeroGrad() { grad = Tensor(value.shape()); }
};

class Tape;

// Handle to a node recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
};

// Define-by-run reverse-mode tape. Nodes are appended in evaluation order,
// so reverse insertion order is a reverse topological order. Confined to
// one thread.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Not differentiated.
  Var Constant(Tensor value);
  // Differentiable leaf whose gradient is read back with grad().
  Var Input(Tensor value);
  // Differentiable leaf bound to a parameter; the parameter must outlive
  // the tape.
  Var Param(Parameter& p);

  const Tensor& value(std::size_t id) const;
  const Tensor& value(Var v) const { return value(v.id); }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Zero tensor for nodes that received no gradient.
  const Tensor& grad(Var v);

  // Mutable gradient buffer of a node, allocated on first use.
  Tensor& GradBuffer(std::size_t id);
  bool HasGrad(std::size_t id) const { return nodes_[id].has_grad; }

  // Seeds d loss / d loss = 1 and propagates to every leaf. Throws
  // Error(kNonScalarLoss) unless loss holds exactly one element.
  void Backward(Var loss);

  // Records an op result. The node requires grad iff some parent does.
  Var Record(Tensor value, std::vector<std::size_t> parents, BackwardFn backward);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;
    Tensor grad;
    bool has_grad = false;
    bool requires_grad = false;
    Parameter* param = nullptr;
    std::vector<std::size_t> parents;
    BackwardFn backward;
  };
  std::deque<Node> nodes_;
};

// y = x W^T + b with x [rows x d_in], W [d_out x d_in], b [d_out].
Var Linear(Var x, Var w, Var b);

// Per-row normalization over the last axis followed by gamma * xhat + beta.
Var LayerNorm(Var x, Var gamma, Var beta, double eps = 1e-5);

// max(0, x); the subgradient at 0 is 0.
Var Relu(Var x);

// Row r is multiplied by the weights generated for position index[r]:
// wb [positions x (d_out * d_in + d_out)] holds a row-major d_out x d_in
// weight followed by d_out biases.
Var GatheredLinear(Var x, Var wb, std::span<const std::size_t> index, std::size_t d_out);

// Rows of x picked by index.
Var GatherRows(Var x, std::span<const std::size_t> index);

// Row-wise x / ||x||_2. Throws Error(kZeroNorm) if a norm is below min_norm.
Var RowNormalize(Var x, double min_norm = 1e-12);

// Mean of the rows sharing each segment id; output [num_segments x cols].
Var SegmentMean(Var x, std::span<const std::size_t> segment, std::size_t num_segments);

// Sum over the last axis of a .* b; output drops the last axis.
Var RowDot(Var a, Var b);
// Mean over the last axis; output drops the last axis.
Var RowMean(Var x);

Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var x, double s);
Var AddScalar(Var x, double c);
Var Square(Var x);
// Gradient taken as 0 where the result is exactly 0.
Var Sqrt(Var x);
Var Sum(Var x);
Var Mean(Var x);
Var Reshape(Var x, Shape shape);

}  // namespace hrtfup::nn

#endif  // HRTFUP_AUTODIFF_H_
