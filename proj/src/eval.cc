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

#include "hrtfup/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "binary_io.h"
#include "hrtfup/error.h"

namespace hrtfup::eval {
namespace {

std::string Fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(Trim(item));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorCode::kFormatError, "not a number: '" + s + "'");
  return v;
}

std::size_t ParseSize(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s.front() == '-') {
    throw Error(ErrorCode::kFormatError, "not a count: '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

bool IsPerfectSquare(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return r * r == n;
}

void WriteText(const std::string& text, const std::filesystem::path& path) {
  internal::WriteFileAtomic(path, std::vector<char>(text.begin(), text.end()));
}

std::vector<std::size_t> Iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

std::vector<std::size_t> DefaultBPrimes() {
  std::vector<std::size_t> out;
  for (std::size_t r = 3; r <= 14; ++r) out.push_back(r * r);
  return out;
}

void ExperimentSpec::Validate() const {
  if (methods.empty()) throw Error(ErrorCode::kInvalidArgument, "no methods given");
  for (const std::string& m : methods) {
    if (m == "autoencoder") {
      if (!checkpoint) throw Error(ErrorCode::kInvalidArgument, "autoencoder needs a checkpoint");
    } else if (m != "passthrough" && m != "RP6U" && m != "RP6B" && m != "RP7U" && m != "RP7B") {
      throw Error(ErrorCode::kInvalidArgument, "unknown method " + m);
    }
  }
  if (b_primes.empty()) throw Error(ErrorCode::kInvalidArgument, "no b_prime values given");
  for (std::size_t b : b_primes) {
    if (!IsPerfectSquare(b) || b == 0 || b > 440) {
      throw Error(ErrorCode::kNotPerfectSquare,
                  "b_prime " + std::to_string(b) + " is not a positive perfect square <= 440");
    }
  }
}

ExperimentSpec ExperimentSpec::Parse(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kFormatError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "methods") {
      spec.methods = SplitList(value, ',');
    } else if (key == "b_primes") {
      spec.b_primes.clear();
      for (const std::string& v : SplitList(value, ',')) spec.b_primes.push_back(ParseSize(v));
    } else if (key == "checkpoint") {
      spec.checkpoint = value;
    } else if (key == "out") {
      spec.out = value;
    } else if (key == "design_dir") {
      spec.design_dir = value;
    } else {
      spec.extra[key] = value;
    }
  }
  return spec;
}

std::string ExperimentSpec::ToString() const {
  std::ostringstream out;
  out << "methods = ";
  for (std::size_t i = 0; i < methods.size(); ++i) out << (i ? ", " : "") << methods[i];
  out << "\nb_primes = ";
  for (std::size_t i = 0; i < b_primes.size(); ++i) out << (i ? ", " : "") << b_primes[i];
  out << '\n';
  if (checkpoint) out << "checkpoint = " << checkpoint->string() << '\n';
  if (this->out) out << "out = " << this->out->string() << '\n';
  out << "design_dir = " << design_dir.string() << '\n';
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
  return out.str();
}

std::vector<std::unique_ptr<Interpolator>> MakeInterpolators(const ExperimentSpec& spec) {
  spec.Validate();
  std::vector<std::unique_ptr<Interpolator>> out;
  for (const std::string& m : spec.methods) {
    if (m == "autoencoder") {
      out.push_back(std::make_unique<AutoencoderInterpolator>(
          AutoencoderInterpolator::FromCheckpoint(*spec.checkpoint)));
    } else if (m == "passthrough") {
      out.push_back(std::make_unique<PassthroughInterpolator>());
    } else {
      out.push_back(std::make_unique<RlrInterpolator>(RlrInterpolator::FromLabel(m)));
    }
  }
  return out;
}

const ResultRow* ResultTable::Find(const std::string& method, std::size_t b_prime) const {
  for (const ResultRow& r : rows) {
    if (r.method == method && r.b_prime == b_prime) return &r;
  }
  return nullptr;
}

ResultTable RunExperiment(std::span<const Interpolator* const> methods, const HrtfSet& test_set,
                          std::span<const std::size_t> b_primes,
                          const std::filesystem::path& design_dir) {
  test_set.Validate();
  ResultTable table;
  table.subjects = test_set.subjects;
  const std::vector<std::size_t> targets = Iota(test_set.num_positions());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const Interpolator* method : methods) {
    for (std::size_t b_prime : b_primes) {
      ResultRow row;
      row.method = method->Name();
      row.b_prime = b_prime;
      try {
        const std::vector<std::size_t> measured =
            TdesignSubsample(test_set.positions, b_prime, design_dir);
        const LogMagnitudes est = method->Interpolate(test_set, measured, targets);
        row.lsd_per_subject = LsdPerSubject(est, test_set.log_magnitudes);
        row.lsd_mean = std::accumulate(row.lsd_per_subject.begin(), row.lsd_per_subject.end(), 0.0) /
                       static_cast<double>(row.lsd_per_subject.size());
      } catch (const std::exception& e) {
        row.error = e.what();
        row.lsd_mean = nan;
        row.lsd_per_subject.assign(test_set.num_subjects(), nan);
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string ToCsv(const ResultTable& table) {
  std::ostringstream out;
  out << "method,b_prime,lsd_mean";
  for (const std::string& s : table.subjects) out << ',' << s;
  out << '\n';
  for (const ResultRow& r : table.rows) {
    if (r.lsd_per_subject.size() != table.subjects.size()) {
      throw Error(ErrorCode::kShapeMismatch, "row " + r.method + " has " +
                                                 std::to_string(r.lsd_per_subject.size()) +
                                                 " subject LSDs, table has " +
                                                 std::to_string(table.subjects.size()) + " subjects");
    }
    out << r.method << ',' << r.b_prime << ',' << Fmt(r.lsd_mean);
    for (double v : r.lsd_per_subject) out << ',' << Fmt(v);
    out << '\n';
  }
  return out.str();
}

void ExportCsv(const ResultTable& table, const std::filesystem::path& path) {
  WriteText(ToCsv(table), path);
}

ResultTable ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormatError, "empty result file");
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() < 3 || header[0] != "method" || header[1] != "b_prime" || header[2] != "lsd_mean") {
    throw Error(ErrorCode::kFormatError, "unexpected result header: " + line);
  }
  ResultTable table;
  table.subjects.assign(header.begin() + 3, header.end());
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    const std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kFormatError, "expected " + std::to_string(header.size()) +
                                               " columns, got " + std::to_string(cells.size()));
    }
    ResultRow row;
    row.method = cells[0];
    row.b_prime = ParseSize(cells[1]);
    row.lsd_mean = ParseDouble(cells[2]);
    for (std::size_t i = 3; i < cells.size(); ++i) row.lsd_per_subject.push_back(ParseDouble(cells[i]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable ReadCsv(const std::filesystem::path& path) {
  const std::vector<char> bytes = internal::ReadFileBytes(path);
  return ParseCsv(std::string(bytes.begin(), bytes.end()));
}

std::string ToPlotdata(const ResultTable& table) {
  std::vector<std::string> methods;
  std::vector<std::size_t> b_primes;
  for (const ResultRow& r : table.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    if (std::find(b_primes.begin(), b_primes.end(), r.b_prime) == b_primes.end()) {
      b_primes.push_back(r.b_prime);
    }
  }
  std::sort(b_primes.begin(), b_primes.end());
  std::ostringstream out;
  out << "# b_prime";
  for (const std::string& m : methods) out << ' ' << m;
  out << '\n';
  for (std::size_t b : b_primes) {
    out << b;
    for (const std::string& m : methods) {
      const ResultRow* r = table.Find(m, b);
      out << ' ' << (r ? Fmt(r->lsd_mean) : std::string("nan"));
    }
    out << '\n';
  }
  return out.str();
}

void ExportPlotdata(const ResultTable& table, const std::filesystem::path& path) {
  WriteText(ToPlotdata(table), path);
}

std::string InspectResponse(std::span<const Interpolator* const> methods, const HrtfSet& set,
                            std::size_t subject, std::size_t position, std::size_t channel,
                            std::size_t b_prime, const std::filesystem::path& design_dir) {
  if (subject >= set.num_subjects() || position >= set.num_positions() || channel >= kNumChannels) {
    throw Error(ErrorCode::kInvalidArgument, "subject, position or channel out of range");
  }
  const std::vector<std::string> ids = {set.subjects[subject]};
  const HrtfSet one = set.SelectSubjects(ids);
  const std::vector<std::size_t> measured = TdesignSubsample(one.positions, b_prime, design_dir);
  const std::vector<std::size_t> target = {position};
  std::vector<LogMagnitudes> estimates;
  for (const Interpolator* m : methods) estimates.push_back(m->Interpolate(one, measured, target));

  std::ostringstream out;
  out << "# frequency_hz truth";
  for (const Interpolator* m : methods) out << ' ' << m->Name();
  out << '\n';
  for (std::size_t l = 0; l < one.num_bins(); ++l) {
    out << Fmt(one.Frequency(l)) << ' ' << Fmt(20.0 * one.log_magnitudes(0, position, channel, l));
    for (const LogMagnitudes& e : estimates) out << ' ' << Fmt(20.0 * e(0, 0, channel, l));
    out << '\n';
  }
  return out.str();
}

}  // namespace hrtfup::eval
