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

#include "hrtfup/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>
#include <sstream>

#include "hrtfup/adam.h"
#include "hrtfup/checkpoint.h"
#include "hrtfup/error.h"
#include "hrtfup/rng.h"

namespace hrtfup::train {
namespace {

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::size_t> Iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

struct ValidationScores {
  double lsd = 0.0;
  double cos_dist = 0.0;
};

// Chunks of at most chunk subjects; LSD weighted by subjects, CosDist by rows.
ValidationScores ScoreValidation(ae::ConditionedAutoencoder& model, const HrtfSet& val,
                                 const StandardizationStats& stats, std::size_t chunk) {
  const std::vector<std::size_t> all = Iota(val.num_positions());
  ValidationScores out;
  double cos_sq = 0.0;
  for (std::size_t start = 0; start < val.num_subjects(); start += chunk) {
    const std::size_t end = std::min(start + chunk, val.num_subjects());
    std::vector<std::size_t> subjects(end - start);
    std::iota(subjects.begin(), subjects.end(), start);
    const ae::Batch batch = ae::MakeBatch(val, subjects, all, all, stats);
    nn::Tape tape;
    const ae::ForwardResult r = ae::ForwardLoss(model, tape, batch, stats, 1.0);
    out.lsd += r.loss.lsd * static_cast<double>(subjects.size());
    cos_sq += r.loss.cos_dist * r.loss.cos_dist * static_cast<double>(subjects.size());
  }
  out.lsd /= static_cast<double>(val.num_subjects());
  out.cos_dist = std::sqrt(cos_sq / static_cast<double>(val.num_subjects()));
  return out;
}

nn::Checkpoint MakeCheckpoint(ae::ConditionedAutoencoder& model, const StandardizationStats& stats,
                              const TrainConfig& cfg, const nn::AdamState& adam, const Rng& rng,
                              const TrainLog& log) {
  nn::Checkpoint ckpt;
  model.SaveTo(ckpt);
  ckpt.metadata["stats.mean"] = Fmt(stats.mean);
  ckpt.metadata["stats.std"] = Fmt(stats.std);
  ckpt.metadata["train.alpha"] = Fmt(cfg.alpha);
  ckpt.metadata["train.lr"] = Fmt(cfg.lr);
  ckpt.metadata["train.batch_subjects"] = std::to_string(cfg.batch_subjects);
  ckpt.metadata["train.seed"] = std::to_string(cfg.seed);
  ckpt.metadata["train.epoch"] = std::to_string(log.epochs.back().epoch);
  ckpt.metadata["train.log"] = log.ToCsv();
  ckpt.adam = adam;
  ckpt.rng_state = rng.SaveState();
  return ckpt;
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (!(lr >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning rate must be non-negative");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be non-negative");
  if (batch_subjects < 1) throw Error(ErrorCode::kInvalidArgument, "batch size must be >= 1");
}

std::string TrainLog::ToCsv() const {
  std::ostringstream out;
  out << "epoch,lsd,cosdist,total,val_lsd\n";
  for (const EpochLog& e : epochs) {
    out << e.epoch << ',' << Fmt(e.lsd) << ',' << Fmt(e.cos_dist) << ',' << Fmt(e.total) << ','
        << Fmt(e.val_lsd) << '\n';
  }
  return out.str();
}

TrainLog TrainLog::FromCsv(const std::string& csv) {
  TrainLog log;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpochLog e;
    char c1, c2, c3, c4;
    std::istringstream ls(line);
    if (!(ls >> e.epoch >> c1 >> e.lsd >> c2 >> e.cos_dist >> c3 >> e.total >> c4 >> e.val_lsd)) {
      throw Error(ErrorCode::kFormatError, "bad train log line: " + line);
    }
    log.epochs.push_back(e);
  }
  for (std::size_t i = 0; i < log.epochs.size(); ++i) {
    if (log.epochs[i].val_lsd < log.epochs[log.best_index].val_lsd) log.best_index = i;
  }
  return log;
}

TrainResult Train(const HrtfSet& train, const HrtfSet& val, const ae::ModelConfig& model_cfg,
                  const TrainConfig& cfg) {
  cfg.Validate();
  train.Validate();
  val.Validate();
  if (train.num_subjects() == 0 || val.num_subjects() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "training and validation sets must be nonempty");
  }
  if (model_cfg.io_dim != kNumChannels * train.num_bins()) {
    throw Error(ErrorCode::kShapeMismatch, "model io_dim " + std::to_string(model_cfg.io_dim) +
                                               " does not match 2 x " + std::to_string(train.num_bins()) +
                                               " bins");
  }
  const StandardizationStats stats = ComputeStandardization(train);
  const nn::AdamConfig adam_cfg{.lr = cfg.lr};

  auto model = std::make_shared<ae::ConditionedAutoencoder>(model_cfg, cfg.seed);
  std::vector<nn::Parameter*> params = model->Parameters();
  nn::AdamState adam = nn::AdamState::For(params);
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  TrainLog log;
  int first_epoch = 1;

  if (cfg.resume_from) {
    const nn::Checkpoint ckpt = nn::ReadCheckpoint(*cfg.resume_from);
    *model = ae::ConditionedAutoencoder::LoadFrom(ckpt);
    params = model->Parameters();
    if (!ckpt.adam) throw Error(ErrorCode::kFormatError, "checkpoint lacks optimizer state");
    adam = *ckpt.adam;
    rng.LoadState(ckpt.rng_state);
    log = TrainLog::FromCsv(ckpt.Meta("train.log"));
    first_epoch = std::stoi(ckpt.Meta("train.epoch")) + 1;
    // Keep only history up to the checkpointed epoch.
    while (!log.epochs.empty() && log.epochs.back().epoch >= first_epoch) log.epochs.pop_back();
    log.best_index = 0;
    for (std::size_t i = 0; i < log.epochs.size(); ++i) {
      if (log.epochs[i].val_lsd < log.epochs[log.best_index].val_lsd) log.best_index = i;
    }
  }

  std::vector<nn::Tensor> best;
  for (const nn::Parameter* p : params) best.push_back(p->value);
  double best_val = log.epochs.empty() ? std::numeric_limits<double>::infinity() : log.best().val_lsd;

  const std::vector<std::size_t> all_positions = Iota(train.num_positions());
  for (int epoch = first_epoch; epoch <= cfg.epochs; ++epoch) {
    // A fresh permutation per epoch, so the order depends only on the RNG state.
    std::vector<std::size_t> order = Iota(train.num_subjects());
    rng.Shuffle(order);
    EpochLog entry;
    entry.epoch = epoch;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_subjects, ++batch_index) {
      const std::size_t end = std::min(start + cfg.batch_subjects, order.size());
      const std::span<const std::size_t> subjects(order.data() + start, end - start);
      const ae::Batch batch = ae::MakeBatch(train, subjects, all_positions, all_positions, stats);
      nn::Tape tape;
      const ae::ForwardResult r = ae::ForwardLoss(*model, tape, batch, stats, cfg.alpha);
      if (!std::isfinite(r.loss.total)) {
        throw Error(ErrorCode::kNonFiniteLoss, "loss " + Fmt(r.loss.total) + " at epoch " +
                                                   std::to_string(epoch) + ", batch " +
                                                   std::to_string(batch_index));
      }
      for (nn::Parameter* p : params) p->ZeroGrad();
      tape.Backward(r.total);
      nn::AdamStep(params, adam, adam_cfg);
      const double w = static_cast<double>(subjects.size()) / static_cast<double>(order.size());
      entry.lsd += w * r.loss.lsd;
      entry.cos_dist += w * r.loss.cos_dist;
      entry.total += w * r.loss.total;
    }
    const ValidationScores scores = ScoreValidation(*model, val, stats, cfg.batch_subjects);
    entry.val_lsd = scores.lsd;
    entry.val_cos_dist = scores.cos_dist;
    log.epochs.push_back(entry);
    if (entry.val_lsd < best_val) {
      best_val = entry.val_lsd;
      log.best_index = log.epochs.size() - 1;
      for (std::size_t i = 0; i < params.size(); ++i) best[i] = params[i]->value;
      if (cfg.checkpoint_path) {
        nn::WriteCheckpoint(MakeCheckpoint(*model, stats, cfg, adam, rng, log), *cfg.checkpoint_path);
      }
    }
    if (cfg.on_epoch) cfg.on_epoch(entry);
  }

  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i]->value = best[i];
    params[i]->ZeroGrad();
  }
  return {model, stats, log};
}

double EvaluateValidation(const Interpolator& method, const HrtfSet& val) {
  const std::vector<std::size_t> all = Iota(val.num_positions());
  return Lsd(method.Interpolate(val, all, all), val.log_magnitudes);
}

}  // namespace hrtfup::train
