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

#ifndef HRTFUP_EVAL_H_
#define HRTFUP_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrtfup/dataset.h"
#include "hrtfup/interpolator.h"

namespace hrtfup::eval {

// 9, 16, 25, ..., 196.
std::vector<std::size_t> DefaultBPrimes();

// One sweep configuration. Parsed from / written to key = value text, e.g.
//   methods = RP6U, RP6B, autoencoder
//   b_primes = 9, 16, 25
//   checkpoint = run/model.ckpt
struct ExperimentSpec {
  // RP6U, RP6B, RP7U, RP7B, autoencoder or passthrough.
  std::vector<std::string> methods = {"RP6U", "RP6B", "RP7U", "RP7B"};
  std::vector<std::size_t> b_primes = DefaultBPrimes();
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> out;
  std::filesystem::path design_dir = DefaultDesignDir();
  // Free-form notes carried through, e.g. which measurement variant was used.
  std::map<std::string, std::string> extra;

  // b_primes must be perfect squares <= 440; autoencoder needs a checkpoint.
  void Validate() const;
  static ExperimentSpec Parse(const std::string& text);
  std::string ToString() const;
};

// Interpolators for the method labels of spec, in order.
std::vector<std::unique_ptr<Interpolator>> MakeInterpolators(const ExperimentSpec& spec);

struct ResultRow {
  std::string method;
  std::size_t b_prime = 0;
  double lsd_mean = 0.0;
  std::vector<double> lsd_per_subject;
  std::string error;  // nonempty for a failed cell; LSDs are then NaN
};

struct ResultTable {
  std::vector<std::string> subjects;
  std::vector<ResultRow> rows;

  const ResultRow* Find(const std::string& method, std::size_t b_prime) const;
};

// One row per (method, b_prime), methods outer. Each cell subsamples the grid
// with the t-design of B' points and scores all positions of test_set.
ResultTable RunExperiment(std::span<const Interpolator* const> methods, const HrtfSet& test_set,
                          std::span<const std::size_t> b_primes,
                          const std::filesystem::path& design_dir);

// Columns: method, b_prime, lsd_mean, then one per test subject.
void ExportCsv(const ResultTable& table, const std::filesystem::path& path);
std::string ToCsv(const ResultTable& table);
ResultTable ReadCsv(const std::filesystem::path& path);
ResultTable ParseCsv(const std::string& text);

// gnuplot table: b_prime then one lsd_mean column per method.
void ExportPlotdata(const ResultTable& table, const std::filesystem::path& path);
std::string ToPlotdata(const ResultTable& table);

// Magnitude responses (dB) of one subject, position and channel: frequency,
// ground truth, then one column per method observed at b_prime positions.
std::string InspectResponse(std::span<const Interpolator* const> methods, const HrtfSet& set,
                            std::size_t subject, std::size_t position, std::size_t channel,
                            std::size_t b_prime, const std::filesystem::path& design_dir);

}  // namespace hrtfup::eval

#endif  // HRTFUP_EVAL_H_
