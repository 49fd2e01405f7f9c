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

#ifndef HRTFUP_DATASET_H_
#define HRTFUP_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrtfup/geom.h"
#include "hrtfup/special_math.h"

namespace hrtfup {

inline constexpr double kTrainingSampleRate = 32000.0;
inline constexpr std::size_t kFftLength = 256;
inline constexpr std::size_t kNumBins = kFftLength / 2;  // 125 Hz ... 16 kHz
inline constexpr std::size_t kNumChannels = 2;

// Dense [subject x position x channel x bin] array, bin fastest.
template <typename T>
class HrtfArray {
 public:
  HrtfArray() = default;
  HrtfArray(std::size_t subjects, std::size_t positions, std::size_t channels,
            std::size_t bins, T fill = T{})
      : subjects_(subjects), positions_(positions), channels_(channels),
        bins_(bins), data_(subjects * positions * channels * bins, fill) {}

  std::size_t subjects() const { return subjects_; }
  std::size_t positions() const { return positions_; }
  std::size_t channels() const { return channels_; }
  std::size_t bins() const { return bins_; }

  std::size_t Offset(std::size_t s, std::size_t b, std::size_t ch, std::size_t l) const {
    return ((s * positions_ + b) * channels_ + ch) * bins_ + l;
  }
  T& operator()(std::size_t s, std::size_t b, std::size_t ch, std::size_t l) {
    return data_[Offset(s, b, ch, l)];
  }
  const T& operator()(std::size_t s, std::size_t b, std::size_t ch, std::size_t l) const {
    return data_[Offset(s, b, ch, l)];
  }

  // The channels x bins block of one (subject, position), channel-major.
  std::span<T> Row(std::size_t s, std::size_t b) {
    return {data_.data() + Offset(s, b, 0, 0), channels_ * bins_};
  }
  std::span<const T> Row(std::size_t s, std::size_t b) const {
    return {data_.data() + Offset(s, b, 0, 0), channels_ * bins_};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <typename U>
  bool SameShape(const HrtfArray<U>& o) const {
    return subjects_ == o.subjects() && positions_ == o.positions() &&
           channels_ == o.channels() && bins_ == o.bins();
  }

 private:
  std::size_t subjects_ = 0;
  std::size_t positions_ = 0;
  std::size_t channels_ = 0;
  std::size_t bins_ = 0;
  std::vector<T> data_;
};

using LogMagnitudes = HrtfArray<double>;
using ComplexSpectra = HrtfArray<Complex>;

// Raw impulse responses of several subjects on one shared position grid.
struct HrirBundle {
  std::vector<std::string> subjects;
  std::vector<CartesianPosition> positions;
  double sample_rate = 0.0;
  std::size_t channels = kNumChannels;
  std::size_t taps = 0;
  // [subject x position x channel x tap], tap fastest.
  std::vector<double> hrirs;

  std::size_t Offset(std::size_t s, std::size_t b, std::size_t ch) const {
    return ((s * positions.size() + b) * channels + ch) * taps;
  }
  // Throws Error(kShapeMismatch / kInvalidArgument) on inconsistency.
  void Validate() const;
};

// log10 magnitudes (and optionally complex values) at bins f_l = l * spacing,
// l = 1 ... bins.
struct HrtfSet {
  std::vector<std::string> subjects;
  std::vector<CartesianPosition> positions;
  double bin_spacing_hz = kTrainingSampleRate / kFftLength;
  LogMagnitudes log_magnitudes;
  std::optional<ComplexSpectra> spectra;

  std::size_t num_subjects() const { return subjects.size(); }
  std::size_t num_positions() const { return positions.size(); }
  std::size_t num_bins() const { return log_magnitudes.bins(); }
  // Frequency of zero-based bin index l, i.e. (l + 1) * spacing.
  double Frequency(std::size_t l) const { return static_cast<double>(l + 1) * bin_spacing_hz; }

  // Keeps only the named subjects, in the given order. Throws
  // Error(kInvalidArgument) for an unknown ID.
  HrtfSet SelectSubjects(std::span<const std::string> ids) const;
  void Validate() const;
};

struct SplitSpec {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;

  // Throws Error(kInvalidArgument) when an ID is repeated across or within splits.
  void Validate() const;
};

// First 77 / next 10 / last 7 for 94 subjects; other counts are split in the
// same proportions, rounded down for train and validation.
SplitSpec DefaultSplit(std::span<const std::string> subjects);

// train.txt, val.txt, test.txt in dir, one subject ID per line.
SplitSpec ReadSplits(const std::filesystem::path& dir);
void WriteSplits(const SplitSpec& split, const std::filesystem::path& dir);

struct StandardizationStats {
  double mean = 0.0;
  double std = 1.0;

  double Apply(double v) const { return (v - mean) / std; }
  double Invert(double v) const { return v * std + mean; }
};

// Global scalar mean and population std over every log-magnitude entry.
// Throws Error(kDegenerateVariance) if std < 1e-12.
StandardizationStats ComputeStandardization(const HrtfSet& train);

// Windowed-sinc polyphase resampling to target_rate. Identity when the rates
// match. Throws Error(kUnsupportedRatio) for upsampling or irrational ratios.
HrirBundle ResampleHrirs(const HrirBundle& bundle, double target_rate = kTrainingSampleRate);

// Zero-pads or truncates to 256 taps, takes the 256-point DFT, conjugates and
// keeps bins 1 ... 128. Expects 32 kHz input.
HrtfSet HrirToHrtf(const HrirBundle& bundle);

// Unit vectors of a spherical t-design, one "x y z" triple per line.
std::vector<CartesianPosition> ReadDesignFile(const std::filesystem::path& path);

// designs/tdesign_t{T}_n{COUNT}.txt
std::filesystem::path DesignFilePath(const std::filesystem::path& design_dir, int t,
                                     std::size_t count);

// Directory holding the shipped t-design files; HRTFUP_DESIGN_DIR overrides.
std::filesystem::path DefaultDesignDir();

// Nearest-grid-neighbor selection of a given design. If a design direction's
// nearest grid point is already taken it falls to the next-nearest unused
// one. Returns sorted indices.
std::vector<std::size_t> NearestNeighborSelection(
    std::span<const CartesianPosition> grid, std::span<const CartesianPosition> design);

// Selection for b_prime measurement positions using the t-design with
// t = sqrt(b_prime) - 1. Throws Error(kNotPerfectSquare) or
// Error(kMissingDesignFile).
std::vector<std::size_t> TdesignSubsample(std::span<const CartesianPosition> grid,
                                          std::size_t b_prime,
                                          const std::filesystem::path& design_dir);

// Bundle files: see docs/bundle_format.md. Errors are Error(kFormatError)
// with the byte offset, or Error(kIoError).
inline constexpr std::uint16_t kBundleVersion = 1;
HrirBundle ReadBundle(const std::filesystem::path& path);
void WriteBundle(const HrirBundle& bundle, const std::filesystem::path& path);

// Prepared HRTF sets (complex spectra plus positions), same conventions.
inline constexpr std::uint16_t kHrtfSetVersion = 1;
HrtfSet ReadHrtfSet(const std::filesystem::path& path);
void WriteHrtfSet(const HrtfSet& set, const std::filesystem::path& path);

// Either file kind, detected by magic. Bundles go through resampling and
// HrirToHrtf.
HrtfSet LoadHrtfSet(const std::filesystem::path& path);

// Recomputes log_magnitudes from spectra, flooring |p| at 1e-300.
void UpdateLogMagnitudes(HrtfSet& set);

// Points of a generalized spiral on a sphere of the given radius.
std::vector<CartesianPosition> SpiralGrid(std::size_t count, double radius);

struct SyntheticSpec {
  std::size_t subjects = 4;
  std::size_t positions = 50;
  std::size_t bins = 16;
  double bin_spacing_hz = 1000.0;
  double radius = 1.47;
  int field_order = 3;
  double speed_of_sound = kDefaultSpeedOfSound;
  std::uint64_t seed = 1;
  std::vector<CartesianPosition> grid;  // spiral grid when empty
};

// HRTFs of random order-limited exterior fields sampled on a sphere. Each
// (subject, channel, bin) draws its own complex coefficients, plus a
// constant monopole term that keeps magnitudes away from zero.
HrtfSet MakeSyntheticHrtfSet(const SyntheticSpec& spec);

// 32 kHz bundle whose HrirToHrtf spectra equal MakeSyntheticHrtfSet(spec)
// up to rounding. Requires spec.bins == 128 and spacing 125 Hz.
HrirBundle MakeSyntheticBundle(const SyntheticSpec& spec);

}  // namespace hrtfup

#endif  // HRTFUP_DATASET_H_
