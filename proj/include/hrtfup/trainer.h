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

#ifndef HRTFUP_TRAINER_H_
#define HRTFUP_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hrtfup/cond_autoencoder.h"
#include "hrtfup/dataset.h"
#include "hrtfup/interpolator.h"

namespace hrtfup::train {

struct EpochLog {
  int epoch = 0;  // 1-based
  double lsd = 0.0;
  double cos_dist = 0.0;
  double total = 0.0;
  double val_lsd = 0.0;
  double val_cos_dist = 0.0;
};

struct TrainConfig {
  int epochs = 1000;
  double lr = 1e-3;
  double alpha = 1.0;
  std::size_t batch_subjects = 8;
  std::uint64_t seed = 0;
  // Written (atomically) whenever validation LSD improves.
  std::optional<std::filesystem::path> checkpoint_path;
  // Continue from a checkpoint written by an earlier run.
  std::optional<std::filesystem::path> resume_from;
  std::function<void(const EpochLog&)> on_epoch;

  void Validate() const;
};


struct TrainLog {
  std::vector<EpochLog> epochs;
  std::size_t best_index = 0;  // into epochs

  const EpochLog& best() const { return epochs.at(best_index); }
  // epoch,lsd,cosdist,total,val_lsd
  std::string ToCsv() const;
  static TrainLog FromCsv(const std::string& csv);
};

struct TrainResult {
  std::shared_ptr<ae::ConditionedAutoencoder> model;  // parameters of the best epoch
  StandardizationStats stats;
  TrainLog log;
};

// Each sample is one subject's full position grid, used as both measurement
// and target set. After every epoch the validation LSD is computed on the
// full grid and the parameters of the lowest one are kept. Standardization
// statistics come from train only. Throws Error(kNonFiniteLoss) naming the
// epoch and batch.
TrainResult Train(const HrtfSet& train, const HrtfSet& val, const ae::ModelConfig& model_cfg,
                  const TrainConfig& cfg);

// Full-grid (B' = B = all positions) LSD over the subjects of val, in dB.
double EvaluateValidation(const Interpolator& method, const HrtfSet& val);

}  // namespace hrtfup::train

#endif  // HRTFUP_TRAINER_H_
