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

#include "hrtfup/autodiff.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "hrtfup/error.h"

namespace hrtfup::nn {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;

ConstMatMap AsMatrix(const Tensor& t, std::size_t rows, std::size_t cols) {
  return ConstMatMap(t.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}
MatMap AsMatrix(Tensor& t, std::size_t rows, std::size_t cols) {
  return MatMap(t.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

void RequireSameTape(Var a, Var b) {
  if (a.tape != b.tape || a.tape == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "operands recorded on different tapes");
  }
}

void RequireSameShape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorCode::kShapeMismatch, std::string(op) + ": " + ShapeString(a.shape()) +
                                               " vs " + ShapeString(b.shape()));
  }
}

Shape DropLast(const Shape& s) { return s.empty() ? s : Shape(s.begin(), s.end() - 1); }

// Adds scale * src to the gradient of node id when it participates.
void Accumulate(Tape& tape, std::size_t id, const Tensor& src, double scale = 1.0) {
  if (!tape.requires_grad(id)) return;
  Tensor& g = tape.GradBuffer(id);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * src[i];
}

// Elementwise unary op with derivative expressed through input x, output y.
template <typename Fwd, typename Deriv>
Var Unary(Var x, Fwd fwd, Deriv deriv) {
  Tape& tape = *x.tape;
  const Tensor& xv = x.value();
  Tensor y(xv.shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = fwd(xv[i]);
  const std::size_t xid = x.id;
  return tape.Record(std::move(y), {xid}, [xid, deriv](Tape& t, std::size_t self) {
    if (!t.requires_grad(xid)) return;
    const Tensor& g = t.GradBuffer(self);
    const Tensor& xv = t.value(xid);
    const Tensor& yv = t.value(self);
    Tensor& gx = t.GradBuffer(xid);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[i] * deriv(xv[i], yv[i]);
  });
}

}  // namespace

const Tensor& Var::value() const { return tape->value(id); }

Var Tape::Constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Tape::Input(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Tape::Param(Parameter& p) {
  Node n;
  n.external = &p.value;
  n.requires_grad = true;
  n.param = &p;
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

const Tensor& Tape::value(std::size_t id) const {
  const Node& n = nodes_.at(id);
  return n.external ? *n.external : n.value;
}

Tensor& Tape::GradBuffer(std::size_t id) {
  Node& n = nodes_.at(id);
  if (!n.has_grad) {
    n.grad = Tensor(value(id).shape());
    n.has_grad = true;
  }
  return n.grad;
}

const Tensor& Tape::grad(Var v) { return GradBuffer(v.id); }

Var Tape::Record(Tensor value, std::vector<std::size_t> parents, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  for (std::size_t p : parents) n.requires_grad = n.requires_grad || nodes_.at(p).requires_grad;
  n.parents = std::move(parents);
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

void Tape::Backward(Var loss) {
  if (loss.tape != this) throw Error(ErrorCode::kInvalidArgument, "loss belongs to another tape");
  if (value(loss.id).size() != 1) {
    throw Error(ErrorCode::kNonScalarLoss,
                "loss has shape " + ShapeString(value(loss.id).shape()));
  }
  GradBuffer(loss.id)[0] += 1.0;
  for (std::size_t id = loss.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.has_grad || !n.requires_grad) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param) {
      Tensor& pg = n.param->grad;
      if (pg.shape() != n.grad.shape()) pg = Tensor(n.grad.shape());
      for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += n.grad[i];
    }
  }
}

Var Linear(Var x, Var w, Var b) {
  RequireSameTape(x, w);
  RequireSameTape(x, b);
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  const Tensor& bv = b.value();
  if (wv.rank() != 2 || bv.rank() != 1 || xv.rank() < 1 || xv.cols() != wv.dim(1) ||
      bv.dim(0) != wv.dim(0)) {
    throw Error(ErrorCode::kShapeMismatch, "Linear: x " + ShapeString(xv.shape()) + ", W " +
                                               ShapeString(wv.shape()) + ", b " +
                                               ShapeString(bv.shape()));
  }
  const std::size_t rows = xv.rows(), d_in = wv.dim(1), d_out = wv.dim(0);
  Shape out_shape = DropLast(xv.shape());
  out_shape.push_back(d_out);
  Tensor y(out_shape);
  auto ym = AsMatrix(y, rows, d_out);
  ym.noalias() = AsMatrix(xv, rows, d_in) * AsMatrix(wv, d_out, d_in).transpose();
  ym.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(bv.data(), static_cast<Eigen::Index>(d_out));
  const std::size_t xid = x.id, wid = w.id, bid = b.id;
  return x.tape->Record(std::move(y), {xid, wid, bid},
                        [=](Tape& t, std::size_t self) {
    const auto g = AsMatrix(t.GradBuffer(self), rows, d_out);
    if (t.requires_grad(xid)) {
      AsMatrix(t.GradBuffer(xid), rows, d_in).noalias() += g * AsMatrix(t.value(wid), d_out, d_in);
    }
    if (t.requires_grad(wid)) {
      AsMatrix(t.GradBuffer(wid), d_out, d_in).noalias() += g.transpose() * AsMatrix(t.value(xid), rows, d_in);
    }
    if (t.requires_grad(bid)) {
      Tensor& gb = t.GradBuffer(bid);
      Eigen::Map<Eigen::RowVectorXd>(gb.data(), static_cast<Eigen::Index>(d_out)) += g.colwise().sum();
    }
  });
}

Var LayerNorm(Var x, Var gamma, Var beta, double eps) {
  RequireSameTape(x, gamma);
  RequireSameTape(x, beta);
  const Tensor& xv = x.value();
  const std::size_t d = xv.cols(), rows = xv.rows();
  if (gamma.value().shape() != Shape{d} || beta.value().shape() != Shape{d}) {
    throw Error(ErrorCode::kShapeMismatch, "LayerNorm: feature size " + std::to_string(d) +
                                               " vs gamma " + ShapeString(gamma.shape()));
  }
  if (d < 2) throw Error(ErrorCode::kShapeMismatch, "LayerNorm needs at least 2 features");
  const Tensor& gv = gamma.value();
  const Tensor& bv = beta.value();
  Tensor y(xv.shape());
  // Saved for backward: normalized input and inverse std per row.
  auto xhat = std::make_shared<Tensor>(xv.shape());
  auto inv_std = std::make_shared<std::vector<double>>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = xv.data() + r * d;
    double mean = 0.0;
    for (std::size_t j = 0; j < d; ++j) mean += xr[j];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mean) * (xr[j] - mean);
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (std::size_t j = 0; j < d; ++j) {
      const double h = (xr[j] - mean) * is;
      (*xhat)[r * d + j] = h;
      y[r * d + j] = gv[j] * h + bv[j];
    }
  }
  const std::size_t xid = x.id, gid = gamma.id, bid = beta.id;
  return x.tape->Record(std::move(y), {xid, gid, bid},
                        [=](Tape& t, std::size_t self) {
    const Tensor& g = t.GradBuffer(self);
    const Tensor& gv = t.value(gid);
    if (t.requires_grad(gid) || t.requires_grad(bid)) {
      Tensor& gg = t.GradBuffer(gid);
      Tensor& gb = t.GradBuffer(bid);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
          gg[j] += g[r * d + j] * (*xhat)[r * d + j];
          gb[j] += g[r * d + j];
        }
      }
    }
    if (!t.requires_grad(xid)) return;
    Tensor& gx = t.GradBuffer(xid);
    for (std::size_t r = 0; r < rows; ++r) {
      double mean_g = 0.0, mean_gh = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double gh = g[r * d + j] * gv[j];
        mean_g += gh;
        mean_gh += gh * (*xhat)[r * d + j];
      }
      mean_g /= static_cast<double>(d);
      mean_gh /= static_cast<double>(d);
      for (std::size_t j = 0; j < d; ++j) {
        const double gh = g[r * d + j] * gv[j];
        gx[r * d + j] += (*inv_std)[r] * (gh - mean_g - (*xhat)[r * d + j] * mean_gh);
      }
    }
  });
}

Var Relu(Var x) {
  return Unary(x, [](double v) { return v > 0.0 ? v : 0.0; },
               [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var GatheredLinear(Var x, Var wb, std::span<const std::size_t> index, std::size_t d_out) {
  RequireSameTape(x, wb);
  const Tensor& xv = x.value();
  const Tensor& wv = wb.value();
  const std::size_t rows = xv.rows(), d_in = xv.cols();
  const std::size_t width = d_out * d_in + d_out;
  if (xv.rank() != 2 || wv.rank() != 2 || wv.dim(1) != width || index.size() != rows) {
    throw Error(ErrorCode::kShapeMismatch,
                "GatheredLinear: x " + ShapeString(xv.shape()) + ", generated " +
                    ShapeString(wv.shape()) + ", " + std::to_string(index.size()) +
                    " indices, d_out " + std::to_string(d_out));
  }
  const std::size_t n_pos = wv.dim(0);
  // Rows grouped by position so each generated matrix is applied once.
  auto groups = std::make_shared<std::vector<std::vector<Eigen::Index>>>(n_pos);
  for (std::size_t r = 0; r < rows; ++r) {
    if (index[r] >= n_pos) throw Error(ErrorCode::kShapeMismatch, "GatheredLinear: position index out of range");
    (*groups)[index[r]].push_back(static_cast<Eigen::Index>(r));
  }
  Tensor y({rows, d_out});
  const auto xm = AsMatrix(xv, rows, d_in);
  auto ym = AsMatrix(y, rows, d_out);
  for (std::size_t p = 0; p < n_pos; ++p) {
    const auto& rs = (*groups)[p];
    if (rs.empty()) continue;
    const ConstMatMap w(wv.data() + p * width, static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
    const Eigen::Map<const Eigen::RowVectorXd> b(wv.data() + p * width + d_out * d_in, static_cast<Eigen::Index>(d_out));
    const RowMatrix xp = xm(rs, Eigen::all);
    RowMatrix yp = xp * w.transpose();
    yp.rowwise() += b;
    ym(rs, Eigen::all) = yp;
  }
  const std::size_t xid = x.id, wid = wb.id;
  return x.tape->Record(std::move(y), {xid, wid}, [=](Tape& t, std::size_t self) {
    const auto g = AsMatrix(t.GradBuffer(self), rows, d_out);
    const Tensor& wv = t.value(wid);
    const auto xm = AsMatrix(t.value(xid), rows, d_in);
    const bool need_x = t.requires_grad(xid), need_w = t.requires_grad(wid);
    Tensor* gx = need_x ? &t.GradBuffer(xid) : nullptr;
    Tensor* gw = need_w ? &t.GradBuffer(wid) : nullptr;
    for (std::size_t p = 0; p < n_pos; ++p) {
      const auto& rs = (*groups)[p];
      if (rs.empty()) continue;
      const RowMatrix gp = g(rs, Eigen::all);
      if (need_x) {
        const ConstMatMap w(wv.data() + p * width, static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
        auto gxm = AsMatrix(*gx, rows, d_in);
        gxm(rs, Eigen::all) += gp * w;
      }
      if (need_w) {
        MatMap gwm(gw->data() + p * width, static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
        const RowMatrix xp = xm(rs, Eigen::all);
        gwm.noalias() += gp.transpose() * xp;
        Eigen::Map<Eigen::RowVectorXd>(gw->data() + p * width + d_out * d_in, static_cast<Eigen::Index>(d_out)) +=
            gp.colwise().sum();
      }
    }
  });
}

Var GatherRows(Var x, std::span<const std::size_t> index) {
  const Tensor& xv = x.value();
  const std::size_t cols = xv.cols(), n_rows = xv.rows();
  const Shape shape = xv.rank() <= 1 ? Shape{index.size()} : Shape{index.size(), cols};
  const std::size_t width = xv.rank() <= 1 ? 1 : cols;
  const std::size_t src_rows = xv.rank() <= 1 ? xv.size() : n_rows;
  Tensor y(shape);
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= src_rows) throw Error(ErrorCode::kShapeMismatch, "GatherRows: index out of range");
    std::copy_n(xv.data() + index[r] * width, width, y.data() + r * width);
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  const std::size_t xid = x.id;
  return x.tape->Record(std::move(y), {xid}, [=](Tape& t, std::size_t self) {
    if (!t.requires_grad(xid)) return;
    const Tensor& g = t.GradBuffer(self);
    Tensor& gx = t.GradBuffer(xid);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t j = 0; j < width; ++j) gx[idx[r] * width + j] += g[r * width + j];
    }
  });
}

Var RowNormalize(Var x, double min_norm) {
  const Tensor& xv = x.value();
  const std::size_t rows = xv.rows(), d = xv.cols();
  Tensor y(xv.shape());
  auto norms = std::make_shared<std::vector<double>>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double ss = 0.0;
    for (std::size_t j = 0; j < d; ++j) ss += xv[r * d + j] * xv[r * d + j];
    const double n = std::sqrt(ss);
    if (!(n >= min_norm)) {
      throw Error(ErrorCode::kZeroNorm, "row " + std::to_string(r) + " has norm " + std::to_string(n));
    }
    (*norms)[r] = n;
    for (std::size_t j = 0; j < d; ++j) y[r * d + j] = xv[r * d + j] / n;
  }
  const std::size_t xid = x.id;
  return x.tape->Record(std::move(y), {xid}, [=](Tape& t, std::size_t self) {
    if (!t.requires_grad(xid)) return;
    const Tensor& g = t.GradBuffer(self);
    const Tensor& yv = t.value(self);
    Tensor& gx = t.GradBuffer(xid);
    for (std::size_t r = 0; r < rows; ++r) {
      double gy = 0.0;
      for (std::size_t j = 0; j < d; ++j) gy += g[r * d + j] * yv[r * d + j];
      for (std::size_t j = 0; j < d; ++j) {
        gx[r * d + j] += (g[r * d + j] - yv[r * d + j] * gy) / (*norms)[r];
      }
    }
  });
}

Var SegmentMean(Var x, std::span<const std::size_t> segment, std::size_t num_segments) {
  const Tensor& xv = x.value();
  const std::size_t rows = xv.rows(), d = xv.cols();
  if (segment.size() != rows) throw Error(ErrorCode::kShapeMismatch, "SegmentMean: one segment id per row");
  auto counts = std::make_shared<std::vector<double>>(num_segments, 0.0);
  for (std::size_t s : segment) {
    if (s >= num_segments) throw Error(ErrorCode::kShapeMismatch, "SegmentMean: segment id out of range");
    (*counts)[s] += 1.0;
  }
  std::vector<std::vector<std::size_t>> members(num_segments);
  for (std::size_t r = 0; r < rows; ++r) members[segment[r]].push_back(r);
  // Each column is summed in sorted order, which makes the result bitwise
  // independent of the row order.
  Tensor y({num_segments, d});
  std::vector<double> column;
  for (std::size_t s = 0; s < num_segments; ++s) {
    if (members[s].empty()) throw Error(ErrorCode::kShapeMismatch, "SegmentMean: empty segment");
    for (std::size_t j = 0; j < d; ++j) {
      column.clear();
      for (std::size_t r : members[s]) column.push_back(xv[r * d + j]);
      std::sort(column.begin(), column.end());
      double acc = 0.0;
      for (double v : column) acc += v;
      y[s * d + j] = acc / (*counts)[s];
    }
  }
  std::vector<std::size_t> seg(segment.begin(), segment.end());
  const std::size_t xid = x.id;
  return x.tape->Record(std::move(y), {xid}, [=](Tape& t, std::size_t self) {
    if (!t.requires_grad(xid)) return;
    const Tensor& g = t.GradBuffer(self);
    Tensor& gx = t.GradBuffer(xid);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < d; ++j) gx[r * d + j] += g[seg[r] * d + j] / (*counts)[seg[r]];
    }
  });
}

Var RowDot(Var a, Var b) {
  RequireSameTape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  RequireSameShape("RowDot", av, bv);
  const std::size_t rows = av.rows(), d = av.cols();
  Tensor y(DropLast(av.shape()));
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += av[r * d + j] * bv[r * d + j];
    y[r] = acc;
  }
  const std::size_t aid = a.id, bid = b.id;
  return a.tape->Record(std::move(y), {aid, bid}, [=](Tape& t, std::size_t self) {
    const Tensor& g = t.GradBuffer(self);
    for (auto [dst, other] : {std::pair{aid, bid}, std::pair{bid, aid}}) {
      if (!t.requires_grad(dst)) continue;
      const Tensor& ov = t.value(other);
      Tensor& gd = t.GradBuffer(dst);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < d; ++j) gd[r * d + j] += g[r] * ov[r * d + j];
      }
    }
  });
}

Var RowMean(Var x) {
  const Tensor& xv = x.value();
  const std::size_t rows = xv.rows(), d = xv.cols();
  Tensor y(DropLast(xv.shape()));
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += xv[r * d + j];
    y[r] = acc / static_cast<double>(d);
  }
  const std::size_t xid = x.id;
  return x.tape->Record(std::move(y), {xid}, [=](Tape& t, std::size_t self) {
    if (!t.requires_grad(xid)) return;
    const Tensor& g = t.GradBuffer(self);
    Tensor& gx = t.GradBuffer(xid);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < d; ++j) gx[r * d + j] += g[r] / static_cast<double>(d);
    }
  });
}

Var Add(Var a, Var b) {
  RequireSameTape(a, b);
  RequireSameShape("Add", a.value(), b.value());
  Tensor y(a.value().shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] + b.value()[i];
  const std::size_t aid = a.id, bid = b.id;
  return a.tape->Record(std::move(y), {aid, bid}, [=](Tape& t, std::size_t self) {
    const Tensor& g = t.GradBuffer(self);
    Accumulate(t, aid, g);
    Accumulate(t, bid, g);
  });
}

Var Sub(Var a, Var b) {
  RequireSameTape(a, b);
  RequireSameShape("Sub", a.value(), b.value());
  Tensor y(a.value().shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] - b.value()[i];
  const std::size_t aid = a.id, bid = b.id;
  return a.tape->Record(std::move(y), {aid, bid}, [=](Tape& t, std::size_t self) {
    const Tensor& g = t.GradBuffer(self);
    Accumulate(t, aid, g);
    Accumulate(t, bid, g, -1.0);
  });
}

Var Mul(Var a, Var b) {
  RequireSameTape(a, b);
  RequireSameShape("Mul", a.value(), b.value());
  Tensor y(a.value().shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = a.value()[i] * b.value()[i];
  const std::size_t aid = a.id, bid = b.id;
  return a.tape->Record(std::move(y), {aid, bid}, [=](Tape& t, std::size_t self) {
    const Tensor& g = t.GradBuffer(self);
    for (auto [dst, other] : {std::pair{aid, bid}, std::pair{bid, aid}}) {
      if (!t.requires_grad(dst)) continue;
      const Tensor& ov = t.value(other);
      Tensor& gd = t.GradBuffer(dst);
      for (std::size_t i = 0; i < gd.size(); ++i) gd[i] += g[i] * ov[i];
    }
  });
}

Var Scale(Var x, double s) {
  return Unary(x, [s](double v) { return s * v; }, [s](double, double) { return s; });
}

Var AddScalar(Var x, double c) {
  return Unary(x, [c](double v) { return v + c; }, [](double, double) { return 1.0; });
}

Var Square(Var x) {
  return Unary(x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Var Sqrt(Var x) {
  return Unary(x, [](double v) { return std::sqrt(v); },
               [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Var Sum(Var x) {
  const Tensor& xv = x.value();
  double acc = 0.0;
  for (double v : xv.values()) acc += v;
  const std::size_t xid = x.id;
  return x.tape->Record(Tensor::Scalar(acc), {xid}, [=](Tape& t, std::size_t self) {
    if (!t.requires_grad(xid)) return;
    const double g = t.GradBuffer(self)[0];
    Tensor& gx = t.GradBuffer(xid);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  });
}

Var Mean(Var x) {
  const double n = static_cast<double>(x.value().size());
  return Scale(Sum(x), 1.0 / n);
}

Var Reshape(Var x, Shape shape) {
  Tensor y = x.value().Reshaped(std::move(shape));
  const std::size_t xid = x.id;
  return x.tape->Record(std::move(y), {xid}, [=](Tape& t, std::size_t self) {
    Accumulate(t, xid, t.GradBuffer(self));
  });
}

}  // namespace hrtfup::nn
