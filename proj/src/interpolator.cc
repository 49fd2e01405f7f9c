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

#include "hrtfup/interpolator.h"

#include <algorithm>
#include <cmath>

#include "hrtfup/checkpoint.h"
#include "hrtfup/error.h"

namespace hrtfup {

LogMagnitudes SelectPositions(const LogMagnitudes& lm, std::span<const std::size_t> positions) {
  LogMagnitudes out(lm.subjects(), positions.size(), lm.channels(), lm.bins());
  for (std::size_t s = 0; s < lm.subjects(); ++s) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (positions[i] >= lm.positions()) throw Error(ErrorCode::kInvalidArgument, "position index out of range");
      std::ranges::copy(lm.Row(s, positions[i]), out.Row(s, i).begin());
    }
  }
  return out;
}

std::vector<double> LsdPerSubject(const LogMagnitudes& est, const LogMagnitudes& truth) {
  if (!est.SameShape(truth)) throw Error(ErrorCode::kShapeMismatch, "LSD operands differ in shape");
  std::vector<double> per_subject(est.subjects(), 0.0);
  const double L = static_cast<double>(est.bins());
  for (std::size_t s = 0; s < est.subjects(); ++s) {
    double acc = 0.0;
    for (std::size_t b = 0; b < est.positions(); ++b) {
      for (std::size_t ch = 0; ch < est.channels(); ++ch) {
        double ss = 0.0;
        for (std::size_t l = 0; l < est.bins(); ++l) {
          const double d = 20.0 * (est(s, b, ch, l) - truth(s, b, ch, l));
          ss += d * d;
        }
        acc += std::sqrt(ss / L);
      }
    }
    per_subject[s] = acc / static_cast<double>(est.positions() * est.channels());
  }
  return per_subject;
}

double Lsd(const LogMagnitudes& est, const LogMagnitudes& truth) {
  const std::vector<double> per = LsdPerSubject(est, truth);
  if (per.empty()) throw Error(ErrorCode::kShapeMismatch, "LSD of an empty set");
  double acc = 0.0;
  for (double v : per) acc += v;
  return acc / static_cast<double>(per.size());
}

LogMagnitudes PassthroughInterpolator::Interpolate(const HrtfSet& set, std::span<const std::size_t>,
                                                   std::span<const std::size_t> targets) const {
  return SelectPositions(set.log_magnitudes, targets);
}

RlrInterpolator RlrInterpolator::FromLabel(const std::string& label) {
  rlr::RlrConfig cfg;
  if (label == "RP6U" || label == "RP6B") {
    cfg.lambda = 1e-6;
  } else if (label == "RP7U" || label == "RP7B") {
    cfg.lambda = 1e-7;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown RLR setting " + label);
  }
  cfg.n_max = 19;
  return RlrInterpolator(label, cfg, label.back() == 'B');
}

LogMagnitudes RlrInterpolator::Interpolate(const HrtfSet& set, std::span<const std::size_t> measured,
                                           std::span<const std::size_t> targets) const {
  rlr::RlrConfig cfg = cfg_;
  if (balanced_) cfg.n_max = rlr::BalancedOrder(measured.size());
  const ComplexSpectra est = rlr::Interpolate(set, measured, targets, cfg);
  LogMagnitudes out(est.subjects(), est.positions(), est.channels(), est.bins());
  for (std::size_t i = 0; i < est.data().size(); ++i) {
    out.data()[i] = std::log10(std::max(std::abs(est.data()[i]), 1e-300));
  }
  return out;
}

AutoencoderInterpolator AutoencoderInterpolator::FromCheckpoint(const std::filesystem::path& path) {
  const nn::Checkpoint ckpt = nn::ReadCheckpoint(path);
  auto model = std::make_shared<ae::ConditionedAutoencoder>(ae::ConditionedAutoencoder::LoadFrom(ckpt));
  StandardizationStats stats;
  try {
    stats.mean = std::stod(ckpt.Meta("stats.mean"));
    stats.std = std::stod(ckpt.Meta("stats.std"));
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad standardization metadata: ") + e.what());
  }
  return AutoencoderInterpolator(std::move(model), stats);
}

LogMagnitudes AutoencoderInterpolator::Interpolate(const HrtfSet& set,
                                                   std::span<const std::size_t> measured,
                                                   std::span<const std::size_t> targets) const {
  return ae::Predict(*model_, stats_, set, measured, targets);
}

}  // namespace hrtfup
