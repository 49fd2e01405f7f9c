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

#include "hrtfup/dataset.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "hrtfup/error.h"

#ifndef HRTFUP_DESIGN_DIR
#define HRTFUP_DESIGN_DIR "designs"
#endif

namespace hrtfup {

void HrirBundle::Validate() const {
  if (!(sample_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  if (subjects.size() * positions.size() * channels * taps != hrirs.size()) {
    throw Error(ErrorCode::kShapeMismatch, "HRIR payload size does not match header counts");
  }
}

void HrtfSet::Validate() const {
  const auto& lm = log_magnitudes;
  if (lm.subjects() != subjects.size() || lm.positions() != positions.size() ||
      lm.channels() != kNumChannels) {
    throw Error(ErrorCode::kShapeMismatch, "log-magnitude tensor does not match set tables");
  }
  if (spectra && !spectra->SameShape(lm)) {
    throw Error(ErrorCode::kShapeMismatch, "complex spectra shape differs from log magnitudes");
  }
  if (!(bin_spacing_hz > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bin spacing must be positive");
}

HrtfSet HrtfSet::SelectSubjects(std::span<const std::string> ids) const {
  std::vector<std::size_t> rows;
  for (const std::string& id : ids) {
    auto it = std::find(subjects.begin(), subjects.end(), id);
    if (it == subjects.end()) throw Error(ErrorCode::kInvalidArgument, "unknown subject " + id);
    rows.push_back(static_cast<std::size_t>(it - subjects.begin()));
  }
  HrtfSet out;
  out.subjects.assign(ids.begin(), ids.end());
  out.positions = positions;
  out.bin_spacing_hz = bin_spacing_hz;
  const auto& lm = log_magnitudes;
  out.log_magnitudes = LogMagnitudes(rows.size(), lm.positions(), lm.channels(), lm.bins());
  if (spectra) out.spectra = ComplexSpectra(rows.size(), lm.positions(), lm.channels(), lm.bins());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t b = 0; b < lm.positions(); ++b) {
      std::ranges::copy(lm.Row(rows[i], b), out.log_magnitudes.Row(i, b).begin());
      if (spectra) std::ranges::copy(spectra->Row(rows[i], b), out.spectra->Row(i, b).begin());
    }
  }
  return out;
}

void SplitSpec::Validate() const {
  std::set<std::string> seen;
  for (const auto* list : {&train, &val, &test}) {
    for (const std::string& id : *list) {
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::kInvalidArgument, "subject " + id + " appears in more than one split");
      }
    }
  }
}

SplitSpec DefaultSplit(std::span<const std::string> subjects) {
  const std::size_t n = subjects.size();
  std::size_t n_train = 77;
  std::size_t n_val = 10;
  if (n != 94) {
    n_train = n * 77 / 94;
    n_val = n * 10 / 94;
  }
  SplitSpec split;
  split.train.assign(subjects.begin(), subjects.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(subjects.begin() + static_cast<std::ptrdiff_t>(n_train),
                   subjects.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(subjects.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), subjects.end());
  return split;
}

namespace {

std::vector<std::string> ReadIdList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open split file " + path.string());
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(first, last - first + 1));
  }
  return ids;
}

void WriteIdList(const std::vector<std::string>& ids, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write split file " + path.string());
  for (const std::string& id : ids) out << id << '\n';
}

}  // namespace

SplitSpec ReadSplits(const std::filesystem::path& dir) {
  SplitSpec split{ReadIdList(dir / "train.txt"), ReadIdList(dir / "val.txt"),
                  ReadIdList(dir / "test.txt")};
  split.Validate();
  return split;
}

void WriteSplits(const SplitSpec& split, const std::filesystem::path& dir) {
  split.Validate();
  std::filesystem::create_directories(dir);
  WriteIdList(split.train, dir / "train.txt");
  WriteIdList(split.val, dir / "val.txt");
  WriteIdList(split.test, dir / "test.txt");
}

StandardizationStats ComputeStandardization(const HrtfSet& train) {
  const std::vector<double>& v = train.log_magnitudes.data();
  if (v.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training set");
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double std = std::sqrt(ss / n);
  if (std < 1e-12) {
    throw Error(ErrorCode::kDegenerateVariance, "training log-magnitude std below 1e-12");
  }
  return {mean, std};
}

void UpdateLogMagnitudes(HrtfSet& set) {
  if (!set.spectra) return;
  const ComplexSpectra& sp = *set.spectra;
  set.log_magnitudes = LogMagnitudes(sp.subjects(), sp.positions(), sp.channels(), sp.bins());
  for (std::size_t i = 0; i < sp.data().size(); ++i) {
    set.log_magnitudes.data()[i] = std::log10(std::max(std::abs(sp.data()[i]), 1e-300));
  }
}

HrtfSet HrirToHrtf(const HrirBundle& bundle) {
  bundle.Validate();
  if (std::abs(bundle.sample_rate - kTrainingSampleRate) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                "HrirToHrtf expects 32 kHz input, got " + std::to_string(bundle.sample_rate));
  }
  HrtfSet set;
  set.subjects = bundle.subjects;
  set.positions = bundle.positions;
  set.bin_spacing_hz = kTrainingSampleRate / static_cast<double>(kFftLength);
  const std::size_t S = bundle.subjects.size();
  const std::size_t B = bundle.positions.size();
  const std::size_t C = bundle.channels;
  ComplexSpectra spectra(S, B, C, kNumBins);
  Eigen::FFT<double> fft;
  std::vector<double> frame(kFftLength);
  std::vector<Complex> spectrum;
  const std::size_t n_copy = std::min(bundle.taps, kFftLength);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t ch = 0; ch < C; ++ch) {
        std::fill(frame.begin(), frame.end(), 0.0);
        const double* src = bundle.hrirs.data() + bundle.Offset(s, b, ch);
        std::copy(src, src + n_copy, frame.begin());
        fft.fwd(spectrum, frame);
        for (std::size_t l = 0; l < kNumBins; ++l) {
          spectra(s, b, ch, l) = std::conj(spectrum[l + 1]);
        }
      }
    }
  }
  set.spectra = std::move(spectra);
  UpdateLogMagnitudes(set);
  return set;
}

std::vector<CartesianPosition> ReadDesignFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingDesignFile, "cannot open t-design file " + path.string());
  std::vector<CartesianPosition> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ss(line);
    CartesianPosition p;
    if (!(ss >> p.x >> p.y >> p.z)) {
      throw Error(ErrorCode::kFormatError,
                  path.string() + ": line " + std::to_string(line_no) + " is not an x y z triple");
    }
    points.push_back(p);
  }
  return points;
}

std::filesystem::path DesignFilePath(const std::filesystem::path& design_dir, int t,
                                     std::size_t count) {
  return design_dir /
         ("tdesign_t" + std::to_string(t) + "_n" + std::to_string(count) + ".txt");
}

std::filesystem::path DefaultDesignDir() {
  if (const char* env = std::getenv("HRTFUP_DESIGN_DIR"); env && *env) return env;
  return HRTFUP_DESIGN_DIR;
}

std::vector<std::size_t> NearestNeighborSelection(
    std::span<const CartesianPosition> grid, std::span<const CartesianPosition> design) {
  if (design.size() > grid.size()) {
    throw Error(ErrorCode::kInvalidArgument, "design has more points than the grid");
  }
  std::vector<CartesianPosition> unit_grid;
  unit_grid.reserve(grid.size());
  for (const auto& g : grid) unit_grid.push_back(Normalized(g));
  std::vector<bool> used(grid.size(), false);
  std::vector<std::size_t> order(grid.size());
  std::vector<double> dots(grid.size());
  std::vector<std::size_t> selection;
  selection.reserve(design.size());
  for (const auto& d : design) {
    const CartesianPosition u = Normalized(d);
    for (std::size_t i = 0; i < grid.size(); ++i) dots[i] = Dot(u, unit_grid[i]);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dots[a] > dots[b]; });
    for (std::size_t i : order) {
      if (!used[i]) {
        used[i] = true;
        selection.push_back(i);
        break;
      }
    }
  }
  std::sort(selection.begin(), selection.end());
  return selection;
}

std::vector<std::size_t> TdesignSubsample(std::span<const CartesianPosition> grid,
                                          std::size_t b_prime,
                                          const std::filesystem::path& design_dir) {
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(b_prime))));
  if (b_prime == 0 || root * root != b_prime) {
    throw Error(ErrorCode::kNotPerfectSquare,
                "B' = " + std::to_string(b_prime) + " is not a perfect square");
  }
  const int t = static_cast<int>(root) - 1;
  const auto path = DesignFilePath(design_dir, t, b_prime);
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingDesignFile, "no t-design file " + path.string());
  }
  const auto design = ReadDesignFile(path);
  if (design.size() != b_prime) {
    throw Error(ErrorCode::kFormatError, path.string() + " holds " +
                                             std::to_string(design.size()) + " points, expected " +
                                             std::to_string(b_prime));
  }
  return NearestNeighborSelection(grid, design);
}

std::vector<CartesianPosition> SpiralGrid(std::size_t count, double radius) {
  std::vector<CartesianPosition> grid;
  grid.reserve(count);
  const double golden = std::numbers::pi * (1.0 + std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i) + 0.5;
    const double theta = std::acos(1.0 - 2.0 * k / static_cast<double>(count));
    const double phi = std::fmod(golden * k, 2.0 * std::numbers::pi);
    grid.push_back(SphToCart({radius, theta, phi}));
  }
  return grid;
}

HrtfSet MakeSyntheticHrtfSet(const SyntheticSpec& spec) {
  HrtfSet set;
  set.positions = spec.grid.empty() ? SpiralGrid(spec.positions, spec.radius) : spec.grid;
  set.bin_spacing_hz = spec.bin_spacing_hz;
  for (std::size_t s = 0; s < spec.subjects; ++s) set.subjects.push_back("synth" + std::to_string(s));
  const std::size_t B = set.positions.size();
  const std::size_t L = spec.bins;
  ComplexSpectra spectra(spec.subjects, B, kNumChannels, L);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n_coef = NumHarmonics(spec.field_order);
  // Per-position spherical harmonics and radii do not depend on the bin.
  std::vector<SphericalPosition> sph;
  for (const auto& p : set.positions) sph.push_back(CartToSph(p));
  std::vector<std::vector<Complex>> harmonics;
  for (const auto& p : sph) harmonics.push_back(SphericalHarmonics(spec.field_order, p.theta, p.phi));

  std::vector<Complex> coef(n_coef);
  for (std::size_t s = 0; s < spec.subjects; ++s) {
    for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
      for (std::size_t l = 0; l < L; ++l) {
        const double k = Wavenumber(set.Frequency(l), spec.speed_of_sound);
        const auto h_ref = SphericalHankelH1Table(spec.field_order, k * spec.radius);
        for (std::size_t j = 0; j < n_coef; ++j) {
          const int n = HarmonicIndex::FromFlat(j).n;
          // Scaled so every order contributes O(0.3) at the reference radius.
          coef[j] = Complex(normal(rng), normal(rng)) * (0.3 / std::abs(h_ref[n]));
        }
        coef[0] += 2.0 * std::sqrt(std::numbers::pi) / std::abs(h_ref[0]);
        for (std::size_t b = 0; b < B; ++b) {
          const auto h = SphericalHankelH1Table(spec.field_order, k * sph[b].r);
          Complex p = 0.0;
          for (std::size_t j = 0; j < n_coef; ++j) {
            p += coef[j] * h[HarmonicIndex::FromFlat(j).n] * harmonics[b][j];
          }
          spectra(s, b, ch, l) = p;
        }
      }
    }
  }
  set.spectra = std::move(spectra);
  UpdateLogMagnitudes(set);
  return set;
}

HrirBundle MakeSyntheticBundle(const SyntheticSpec& spec) {
  if (spec.bins != kNumBins || std::abs(spec.bin_spacing_hz - 125.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic bundles need 128 bins at 125 Hz spacing");
  }
  const HrtfSet set = MakeSyntheticHrtfSet(spec);
  HrirBundle bundle;
  bundle.subjects = set.subjects;
  bundle.positions = set.positions;
  bundle.sample_rate = kTrainingSampleRate;
  bundle.channels = kNumChannels;
  bundle.taps = kFftLength;
  bundle.hrirs.resize(set.num_subjects() * set.num_positions() * kNumChannels * kFftLength);
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum(kFftLength);
  std::vector<double> frame;
  const ComplexSpectra& sp = *set.spectra;
  for (std::size_t s = 0; s < set.num_subjects(); ++s) {
    for (std::size_t b = 0; b < set.num_positions(); ++b) {
      for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
        // Undo the conjugation of HrirToHrtf; DC set to the first bin's
        // magnitude and the Nyquist bin collapsed to its magnitude so the
        // spectrum belongs to a real signal.
        spectrum[0] = std::abs(sp(s, b, ch, 0));
        for (std::size_t l = 1; l < kNumBins; ++l) {
          spectrum[l] = std::conj(sp(s, b, ch, l - 1));
          spectrum[kFftLength - l] = sp(s, b, ch, l - 1);
        }
        spectrum[kNumBins] = std::abs(sp(s, b, ch, kNumBins - 1));
        fft.inv(frame, spectrum);
        std::copy(frame.begin(), frame.end(), bundle.hrirs.begin() + static_cast<std::ptrdiff_t>(bundle.Offset(s, b, ch)));
      }
    }
  }
  return bundle;
}

}  // namespace hrtfup
