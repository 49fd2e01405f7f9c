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

#include "hrtfup/cond_autoencoder.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "hrtfup/error.h"

namespace hrtfup::ae {
namespace {

nn::Parameter UniformParameter(std::string name, nn::Shape shape, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
  nn::Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.Uniform(-bound, bound);
  return nn::Parameter(std::move(name), std::move(t));
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Assign(nn::Parameter& p, const nn::Checkpoint& ckpt) {
  const nn::Tensor& t = ckpt.Find(p.name);
  if (t.shape() != p.value.shape()) {
    throw Error(ErrorCode::kShapeMismatch, "checkpoint tensor " + p.name + " has shape " +
                                               nn::ShapeString(t.shape()) + ", model expects " +
                                               nn::ShapeString(p.value.shape()));
  }
  p.value = t;
  p.ZeroGrad();
}

}  // namespace

void ModelConfig::Validate() const {
  if (io_dim % kNumChannels != 0 || io_dim < 2 * kNumChannels) {
    throw Error(ErrorCode::kInvalidArgument, "io_dim must hold both channels");
  }
  if (hidden_dim < 2 || latent_dim < 1 || generator_hidden < 1) {
    throw Error(ErrorCode::kInvalidArgument, "layer sizes must be positive (hidden_dim >= 2)");
  }
  if (!(ln_eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ln_eps must be positive");
}

WeightBiasGenerator::WeightBiasGenerator(std::string name, std::size_t d_in, std::size_t d_out,
                                         std::size_t hidden, Rng& rng)
    : d_in_(d_in), d_out_(d_out),
      w1_(UniformParameter(name + ".w1", {hidden, 3}, 3, rng)),
      b1_(UniformParameter(name + ".b1", {hidden}, 3, rng)),
      w2_(UniformParameter(name + ".w2", {d_out * d_in + d_out, hidden}, hidden, rng)),
      b2_(UniformParameter(name + ".b2", {d_out * d_in + d_out}, hidden, rng)) {}

nn::Var WeightBiasGenerator::Generate(nn::Tape& tape, nn::Var positions) {
  nn::Var h = nn::Relu(nn::Linear(positions, tape.Param(w1_), tape.Param(b1_)));
  return nn::Linear(h, tape.Param(w2_), tape.Param(b2_));
}

std::vector<nn::Parameter*> WeightBiasGenerator::Parameters() { return {&w1_, &b1_, &w2_, &b2_}; }

nn::Var HyperLinear::Forward(nn::Tape& tape, nn::Var x, nn::Var positions,
                             std::span<const std::size_t> position_of_row) {
  nn::Var wb = generator_.Generate(tape, positions);
  return nn::GatheredLinear(x, wb, position_of_row, generator_.d_out());
}

RowLayout RowLayout::Make(std::size_t subjects, std::size_t per_subject) {
  RowLayout l;
  l.subjects = subjects;
  l.per_subject = per_subject;
  for (std::size_t s = 0; s < subjects; ++s) {
    for (std::size_t b = 0; b < per_subject; ++b) {
      l.subject_of_row.push_back(s);
      l.position_of_row.push_back(b);
    }
  }
  return l;
}

nn::Tensor PositionTensor(std::span<const CartesianPosition> positions) {
  nn::Tensor t({positions.size(), 3});
  for (std::size_t i = 0; i < positions.size(); ++i) {
    t[3 * i] = positions[i].x;
    t[3 * i + 1] = positions[i].y;
    t[3 * i + 2] = positions[i].z;
  }
  return t;
}

ConditionedAutoencoder::ConditionedAutoencoder(const ModelConfig& cfg, std::uint64_t seed)
    : ConditionedAutoencoder(cfg, Rng(seed)) {}

ConditionedAutoencoder::ConditionedAutoencoder(const ModelConfig& cfg, Rng rng)
    : cfg_((cfg.Validate(), cfg)),
      enc1_("enc1", cfg.io_dim, cfg.hidden_dim, cfg.generator_hidden, rng),
      enc2_("enc2", cfg.hidden_dim, cfg.latent_dim, cfg.generator_hidden, rng),
      dec1_("dec1", cfg.latent_dim, cfg.hidden_dim, cfg.generator_hidden, rng),
      dec2_("dec2", cfg.hidden_dim, cfg.io_dim, cfg.generator_hidden, rng),
      enc_gamma_("enc_ln.gamma", nn::Tensor({cfg.hidden_dim}, 1.0)),
      enc_beta_("enc_ln.beta", nn::Tensor({cfg.hidden_dim}, 0.0)),
      dec_gamma_("dec_ln.gamma", nn::Tensor({cfg.hidden_dim}, 1.0)),
      dec_beta_("dec_ln.beta", nn::Tensor({cfg.hidden_dim}, 0.0)) {}

nn::Var ConditionedAutoencoder::Encode(nn::Tape& tape, nn::Var x, nn::Var positions,
                                       const RowLayout& layout) {
  if (x.value().rank() != 2 || x.value().dim(0) != layout.rows() || x.value().dim(1) != cfg_.io_dim) {
    throw Error(ErrorCode::kShapeMismatch, "Encode: input " + nn::ShapeString(x.shape()) +
                                               " for " + std::to_string(layout.rows()) + " rows of " +
                                               std::to_string(cfg_.io_dim));
  }
  nn::Var h = enc1_.Forward(tape, x, positions, layout.position_of_row);
  h = nn::Relu(nn::LayerNorm(h, tape.Param(enc_gamma_), tape.Param(enc_beta_), cfg_.ln_eps));
  return enc2_.Forward(tape, h, positions, layout.position_of_row);
}

nn::Var ConditionedAutoencoder::Aggregate(nn::Tape&, nn::Var latents, const RowLayout& layout) {
  if (latents.value().rank() != 2 || latents.value().dim(0) != layout.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "Aggregate: latent rows do not match layout");
  }
  nn::Var unit = nn::RowNormalize(latents);
  nn::Var mean = nn::SegmentMean(unit, layout.subject_of_row, layout.subjects);
  return nn::RowNormalize(mean);
}

nn::Var ConditionedAutoencoder::Decode(nn::Tape& tape, nn::Var prototypes, nn::Var positions,
                                       const RowLayout& layout) {
  if (prototypes.value().rank() != 2 || prototypes.value().dim(0) != layout.subjects ||
      prototypes.value().dim(1) != cfg_.latent_dim) {
    throw Error(ErrorCode::kShapeMismatch, "Decode: prototypes " + nn::ShapeString(prototypes.shape()));
  }
  nn::Var z = nn::GatherRows(prototypes, layout.subject_of_row);
  nn::Var h = dec1_.Forward(tape, z, positions, layout.position_of_row);
  h = nn::Relu(nn::LayerNorm(h, tape.Param(dec_gamma_), tape.Param(dec_beta_), cfg_.ln_eps));
  return dec2_.Forward(tape, h, positions, layout.position_of_row);
}

std::vector<nn::Parameter*> ConditionedAutoencoder::Parameters() {
  std::vector<nn::Parameter*> out;
  for (HyperLinear* l : {&enc1_, &enc2_, &dec1_, &dec2_}) {
    for (nn::Parameter* p : l->generator().Parameters()) out.push_back(p);
  }
  for (nn::Parameter* p : {&enc_gamma_, &enc_beta_, &dec_gamma_, &dec_beta_}) out.push_back(p);
  return out;
}

void ConditionedAutoencoder::SaveTo(nn::Checkpoint& ckpt) {
  ckpt.metadata["model.io_dim"] = std::to_string(cfg_.io_dim);
  ckpt.metadata["model.hidden_dim"] = std::to_string(cfg_.hidden_dim);
  ckpt.metadata["model.latent_dim"] = std::to_string(cfg_.latent_dim);
  ckpt.metadata["model.generator_hidden"] = std::to_string(cfg_.generator_hidden);
  ckpt.metadata["model.ln_eps"] = FormatDouble(cfg_.ln_eps);
  for (nn::Parameter* p : Parameters()) ckpt.tensors.emplace_back(p->name, p->value);
}

ConditionedAutoencoder ConditionedAutoencoder::LoadFrom(const nn::Checkpoint& ckpt) {
  ModelConfig cfg;
  try {
    cfg.io_dim = std::stoul(ckpt.Meta("model.io_dim"));
    cfg.hidden_dim = std::stoul(ckpt.Meta("model.hidden_dim"));
    cfg.latent_dim = std::stoul(ckpt.Meta("model.latent_dim"));
    cfg.generator_hidden = std::stoul(ckpt.Meta("model.generator_hidden"));
    cfg.ln_eps = std::stod(ckpt.Meta("model.ln_eps"));
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad model hyperparameter: ") + e.what());
  }
  ConditionedAutoencoder model(cfg, 0);
  for (nn::Parameter* p : model.Parameters()) Assign(*p, ckpt);
  return model;
}

nn::Var LsdLoss(nn::Var est_logmag, nn::Var true_logmag, std::size_t channels) {
  const nn::Tensor& e = est_logmag.value();
  if (e.shape() != true_logmag.value().shape() || e.rank() != 2 || e.dim(1) % channels != 0) {
    throw Error(ErrorCode::kShapeMismatch, "LSD: estimate " + nn::ShapeString(e.shape()) +
                                               " vs truth " + nn::ShapeString(true_logmag.shape()));
  }
  const std::size_t bins = e.dim(1) / channels;
  nn::Var diff = nn::Reshape(nn::Sub(est_logmag, true_logmag), {e.dim(0) * channels, bins});
  nn::Var rms = nn::Sqrt(nn::RowMean(nn::Square(nn::Scale(diff, 20.0))));
  return nn::Mean(rms);
}

nn::Var CosDistLoss(nn::Var latents, nn::Var prototypes, const RowLayout& layout) {
  nn::Var zu = nn::RowNormalize(latents);
  nn::Var pu = nn::RowNormalize(nn::GatherRows(prototypes, layout.subject_of_row));
  nn::Var one_minus_cos = nn::AddScalar(nn::Scale(nn::RowDot(zu, pu), -1.0), 1.0);
  return nn::Sqrt(nn::Mean(nn::Square(one_minus_cos)));
}

Batch MakeBatch(const HrtfSet& set, std::span<const std::size_t> subjects,
                std::span<const std::size_t> measured, std::span<const std::size_t> targets,
                const StandardizationStats& stats) {
  const LogMagnitudes& lm = set.log_magnitudes;
  const std::size_t io = lm.channels() * lm.bins();
  Batch batch;
  for (std::size_t b : measured) batch.measured_positions.push_back(set.positions.at(b));
  for (std::size_t b : targets) batch.target_positions.push_back(set.positions.at(b));
  batch.measured_layout = RowLayout::Make(subjects.size(), measured.size());
  batch.target_layout = RowLayout::Make(subjects.size(), targets.size());
  batch.measured = nn::Tensor({subjects.size() * measured.size(), io});
  batch.target = nn::Tensor({subjects.size() * targets.size(), io});
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    for (std::size_t j = 0; j < measured.size(); ++j) {
      const auto row = lm.Row(subjects[i], measured[j]);
      double* dst = batch.measured.data() + (i * measured.size() + j) * io;
      for (std::size_t k = 0; k < io; ++k) dst[k] = stats.Apply(row[k]);
    }
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const auto row = lm.Row(subjects[i], targets[j]);
      std::copy(row.begin(), row.end(), batch.target.data() + (i * targets.size() + j) * io);
    }
  }
  return batch;
}

ForwardResult ForwardLoss(ConditionedAutoencoder& model, nn::Tape& tape, const Batch& batch,
                          const StandardizationStats& stats, double alpha) {
  nn::Var x = tape.Constant(batch.measured);
  nn::Var meas_pos = tape.Constant(PositionTensor(batch.measured_positions));
  nn::Var target_pos = tape.Constant(PositionTensor(batch.target_positions));
  nn::Var latents = model.Encode(tape, x, meas_pos, batch.measured_layout);
  nn::Var prototypes = model.Aggregate(tape, latents, batch.measured_layout);
  nn::Var out = model.Decode(tape, prototypes, target_pos, batch.target_layout);
  nn::Var estimate = nn::AddScalar(nn::Scale(out, stats.std), stats.mean);
  nn::Var lsd = LsdLoss(estimate, tape.Constant(batch.target), kNumChannels);
  nn::Var cos = CosDistLoss(latents, prototypes, batch.measured_layout);
  nn::Var total = alpha == 0.0 ? lsd : nn::Add(lsd, nn::Scale(cos, alpha));
  ForwardResult r;
  r.loss.lsd = lsd.value().item();
  r.loss.cos_dist = cos.value().item();
  r.loss.alpha = alpha;
  r.loss.total = total.value().item();
  r.total = total;
  r.estimate = estimate;
  return r;
}

LogMagnitudes Predict(ConditionedAutoencoder& model, const StandardizationStats& stats,
                      const HrtfSet& set, std::span<const std::size_t> measured,
                      std::span<const std::size_t> targets) {
  const std::size_t S = set.num_subjects();
  std::vector<std::size_t> subjects(S);
  for (std::size_t s = 0; s < S; ++s) subjects[s] = s;
  const Batch batch = MakeBatch(set, subjects, measured, targets, stats);
  nn::Tape tape;
  nn::Var x = tape.Constant(batch.measured);
  nn::Var latents = model.Encode(tape, x, tape.Constant(PositionTensor(batch.measured_positions)),
                                 batch.measured_layout);
  nn::Var prototypes = model.Aggregate(tape, latents, batch.measured_layout);
  nn::Var out = model.Decode(tape, prototypes, tape.Constant(PositionTensor(batch.target_positions)),
                             batch.target_layout);
  const nn::Tensor& y = out.value();
  const LogMagnitudes& lm = set.log_magnitudes;
  LogMagnitudes est(S, targets.size(), lm.channels(), lm.bins());
  const std::size_t io = lm.channels() * lm.bins();
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t j = 0; j < targets.size(); ++j) {
      auto row = est.Row(s, j);
      const double* src = y.data() + (s * targets.size() + j) * io;
      for (std::size_t k = 0; k < io; ++k) row[k] = stats.Invert(src[k]);
    }
  }
  return est;
}

}  // namespace hrtfup::ae
