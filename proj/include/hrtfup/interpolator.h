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

#ifndef HRTFUP_INTERPOLATOR_H_
#define HRTFUP_INTERPOLATOR_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hrtfup/cond_autoencoder.h"
#include "hrtfup/dataset.h"
#include "hrtfup/rlr.h"

namespace hrtfup {

// Common surface of every upsampling method: estimate log10 magnitudes at
// the target positions of every subject in set, observing only the measured
// position indices.
class Interpolator {
 public:
  virtual ~Interpolator() = default;
  virtual std::string Name() const = 0;
  virtual LogMagnitudes Interpolate(const HrtfSet& set, std::span<const std::size_t> measured,
                                    std::span<const std::size_t> targets) const = 0;
};

// Ground truth at the targets; a harness sanity check.
class PassthroughInterpolator : public Interpolator {
 public:
  std::string Name() const override { return "passthrough"; }
  LogMagnitudes Interpolate(const HrtfSet& set, std::span<const std::size_t> measured,
                            std::span<const std::size_t> targets) const override;
};

// Spherical wavefunction ridge regression. With balanced set, n_max is
// sqrt(B') - 1 for each call; otherwise cfg.n_max.
class RlrInterpolator : public Interpolator {
 public:
  RlrInterpolator(std::string name, rlr::RlrConfig cfg, bool balanced)
      : name_(std::move(name)), cfg_(cfg), balanced_(balanced) {}

  // RP6U, RP6B, RP7U or RP7B. Throws Error(kInvalidArgument) otherwise.
  static RlrInterpolator FromLabel(const std::string& label);

  std::string Name() const override { return name_; }
  const rlr::RlrConfig& config() const { return cfg_; }
  bool balanced() const { return balanced_; }
  LogMagnitudes Interpolate(const HrtfSet& set, std::span<const std::size_t> measured,
                            std::span<const std::size_t> targets) const override;

 private:
  std::string name_;
  rlr::RlrConfig cfg_;
  bool balanced_;
};

class AutoencoderInterpolator : public Interpolator {
 public:
  AutoencoderInterpolator(std::shared_ptr<ae::ConditionedAutoencoder> model,
                          StandardizationStats stats, std::string name = "autoencoder")
      : model_(std::move(model)), stats_(stats), name_(std::move(name)) {}

  // Model and standardization statistics from a training checkpoint.
  static AutoencoderInterpolator FromCheckpoint(const std::filesystem::path& path);

  std::string Name() const override { return name_; }
  LogMagnitudes Interpolate(const HrtfSet& set, std::span<const std::size_t> measured,
                            std::span<const std::size_t> targets) const override;

 private:
  std::shared_ptr<ae::ConditionedAutoencoder> model_;
  StandardizationStats stats_;
  std::string name_;
};

// log10 magnitudes of set restricted to the given positions.
LogMagnitudes SelectPositions(const LogMagnitudes& lm, std::span<const std::size_t> positions);

// (1 / 2SB) sum over s, b, ch of sqrt(mean over l of (20 (est - truth))^2),
// in dB. Throws Error(kShapeMismatch).
double Lsd(const LogMagnitudes& est, const LogMagnitudes& truth);

// The same average restricted to each subject.
std::vector<double> LsdPerSubject(const LogMagnitudes& est, const LogMagnitudes& truth);

}  // namespace hrtfup

#endif  // HRTFUP_INTERPOLATOR_H_
