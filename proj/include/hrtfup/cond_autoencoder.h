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

#ifndef HRTFUP_COND_AUTOENCODER_H_
#define HRTFUP_COND_AUTOENCODER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hrtfup/autodiff.h"
#include "hrtfup/checkpoint.h"
#include "hrtfup/dataset.h"
#include "hrtfup/geom.h"
#include "hrtfup/rng.h"

namespace hrtfup::ae {

struct ModelConfig {
  std::size_t io_dim = 2 * kNumBins;   // left bins then right bins
  std::size_t hidden_dim = 2 * kNumBins;
  std::size_t latent_dim = 64;
  std::size_t generator_hidden = 64;
  double ln_eps = 1e-5;

  void Validate() const;
};

// MLP mapping a Cartesian position to the weights and biases of one target
// linear layer: Linear(3 -> H) -> ReLU -> Linear(H -> d_out * d_in + d_out).
class WeightBiasGenerator {
 public:
  WeightBiasGenerator(std::string name, std::size_t d_in, std::size_t d_out, std::size_t hidden,
                      Rng& rng);

  // positions [P x 3] -> [P x (d_out * d_in + d_out)]
  nn::Var Generate(nn::Tape& tape, nn::Var positions);

  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  std::vector<nn::Parameter*> Parameters();

 private:
  std::size_t d_in_;
  std::size_t d_out_;
  nn::Parameter w1_, b1_, w2_, b2_;
};

// A linear layer with no weights of its own; they come from its generator,
// evaluated at the position of each row.
class HyperLinear {
 public:
  HyperLinear(std::string name, std::size_t d_in, std::size_t d_out, std::size_t hidden, Rng& rng)
      : generator_(std::move(name), d_in, d_out, hidden, rng) {}

  nn::Var Forward(nn::Tape& tape, nn::Var x, nn::Var positions,
                  std::span<const std::size_t> position_of_row);
  WeightBiasGenerator& generator() { return generator_; }

 private:
  WeightBiasGenerator generator_;
};

// Rows of a batch are ordered subject-major: row = s * per_subject + b.
struct RowLayout {
  std::size_t subjects = 0;
  std::size_t per_subject = 0;
  std::vector<std::size_t> subject_of_row;
  std::vector<std::size_t> position_of_row;

  static RowLayout Make(std::size_t subjects, std::size_t per_subject);
  std::size_t rows() const { return subjects * per_subject; }
};

nn::Tensor PositionTensor(std::span<const CartesianPosition> positions);

class ConditionedAutoencoder {
 public:
  ConditionedAutoencoder(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }

  // Standardized log magnitudes [rows x io_dim] -> latents [rows x latent_dim].
  nn::Var Encode(nn::Tape& tape, nn::Var x, nn::Var positions, const RowLayout& layout);

  // Unit-normalize each latent, average per subject, normalize the mean.
  // Throws Error(kZeroNorm) for vanishing latents or means.
  nn::Var Aggregate(nn::Tape& tape, nn::Var latents, const RowLayout& layout);

  // Prototypes [subjects x latent_dim] -> standardized outputs [rows x io_dim]
  // at the target positions of layout.
  nn::Var Decode(nn::Tape& tape, nn::Var prototypes, nn::Var positions, const RowLayout& layout);

  std::vector<nn::Parameter*> Parameters();

  // Hyperparameters in metadata, weights as named tensors.
  void SaveTo(nn::Checkpoint& ckpt);
  static ConditionedAutoencoder LoadFrom(const nn::Checkpoint& ckpt);

 private:
  ConditionedAutoencoder(const ModelConfig& cfg, Rng rng);

  ModelConfig cfg_;
  HyperLinear enc1_, enc2_, dec1_, dec2_;
  nn::Parameter enc_gamma_, enc_beta_, dec_gamma_, dec_beta_;
};

struct LossBreakdown {
  double lsd = 0.0;       // dB
  double cos_dist = 0.0;
  double alpha = 1.0;
  double total = 0.0;     // lsd + alpha * cos_dist
};

// Mean over (subject, position, channel) of the RMS over bins of
// 20 (est - truth), with both arguments log10 magnitudes [rows x 2L].
nn::Var LsdLoss(nn::Var est_logmag, nn::Var true_logmag, std::size_t channels = kNumChannels);

// sqrt(mean over rows of (1 - cos(z_row, prototype_of_row))^2).
nn::Var CosDistLoss(nn::Var latents, nn::Var prototypes, const RowLayout& layout);

// One training or evaluation example set: several subjects sharing the same
// measurement and target grids.
struct Batch {
  std::vector<CartesianPosition> measured_positions;
  std::vector<CartesianPosition> target_positions;
  RowLayout measured_layout;
  RowLayout target_layout;
  nn::Tensor measured;  // standardized log10 magnitudes [S * B' x io_dim]
  nn::Tensor target;    // raw log10 magnitudes [S * B x io_dim]
};

Batch MakeBatch(const HrtfSet& set, std::span<const std::size_t> subjects,
                std::span<const std::size_t> measured, std::span<const std::size_t> targets,
                const StandardizationStats& stats);

struct ForwardResult {
  LossBreakdown loss;
  nn::Var total;
  nn::Var estimate;  // de-standardized log10 magnitudes [S * B x io_dim]
};

// encode -> aggregate -> decode -> de-standardize -> LSD, plus CosDist on
// the encoder latents.
ForwardResult ForwardLoss(ConditionedAutoencoder& model, nn::Tape& tape, const Batch& batch,
                          const StandardizationStats& stats, double alpha);

// Inference on every subject of set: log10 magnitudes at targets.
LogMagnitudes Predict(ConditionedAutoencoder& model, const StandardizationStats& stats,
                      const HrtfSet& set, std::span<const std::size_t> measured,
                      std::span<const std::size_t> targets);

}  // namespace hrtfup::ae

#endif  // HRTFUP_COND_AUTOENCODER_H_
