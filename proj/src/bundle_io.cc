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

#include <fstream>
#include <string>
#include <vector>

#include "binary_io.h"
#include "hrtfup/dataset.h"
#include "hrtfup/error.h"

namespace hrtfup {
namespace {

constexpr std::string_view kBundleMagic = "HRIRB1";
constexpr std::string_view kHrtfSetMagic = "HRTFS1";

void CheckVersion(internal::ByteReader& r, std::uint16_t expected) {
  const std::size_t at = r.offset();
  const std::uint16_t found = r.U16();
  if (found != expected) {
    throw Error(ErrorCode::kFormatError, "version mismatch at byte offset " + std::to_string(at) +
                                             ": expected " + std::to_string(expected) +
                                             ", found " + std::to_string(found));
  }
}

void WritePositions(internal::ByteWriter& w, const std::vector<CartesianPosition>& positions) {
  for (const auto& p : positions) {
    w.F64(p.x);
    w.F64(p.y);
    w.F64(p.z);
  }
}

std::vector<CartesianPosition> ReadPositions(internal::ByteReader& r, std::size_t count) {
  r.Need(count * 24);
  std::vector<CartesianPosition> positions(count);
  for (auto& p : positions) {
    p.x = r.F64();
    p.y = r.F64();
    p.z = r.F64();
  }
  return positions;
}

std::vector<std::string> ReadSubjects(internal::ByteReader& r, std::size_t count) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < count; ++i) ids.push_back(r.String());
  return ids;
}

}  // namespace

void WriteBundle(const HrirBundle& bundle, const std::filesystem::path& path) {
  bundle.Validate();
  internal::ByteWriter w;
  w.Bytes(kBundleMagic);
  w.U16(kBundleVersion);
  w.U32(static_cast<std::uint32_t>(bundle.subjects.size()));
  w.U32(static_cast<std::uint32_t>(bundle.positions.size()));
  w.U32(static_cast<std::uint32_t>(bundle.channels));
  w.U32(static_cast<std::uint32_t>(bundle.taps));
  w.F64(bundle.sample_rate);
  for (const auto& id : bundle.subjects) w.String(id);
  WritePositions(w, bundle.positions);
  for (double v : bundle.hrirs) w.F64(v);
  internal::WriteFileAtomic(path, w.buffer());
}

HrirBundle ReadBundle(const std::filesystem::path& path) {
  internal::ByteReader r(internal::ReadFileBytes(path));
  if (r.Bytes(std::min<std::size_t>(r.remaining(), kBundleMagic.size())) != kBundleMagic) {
    throw Error(ErrorCode::kFormatError, "bad magic at byte offset 0, expected HRIRB1");
  }
  CheckVersion(r, kBundleVersion);
  HrirBundle bundle;
  const std::uint32_t n_subjects = r.U32();
  const std::uint32_t n_positions = r.U32();
  bundle.channels = r.U32();
  bundle.taps = r.U32();
  bundle.sample_rate = r.F64();
  if (!(bundle.sample_rate > 0.0)) r.Fail("non-positive sample rate");
  bundle.subjects = ReadSubjects(r, n_subjects);
  bundle.positions = ReadPositions(r, n_positions);
  const std::size_t n = std::size_t{n_subjects} * n_positions * bundle.channels * bundle.taps;
  r.Need(n * 8);
  bundle.hrirs.resize(n);
  for (double& v : bundle.hrirs) v = r.F64();
  if (!r.AtEnd()) r.Fail("trailing bytes after payload");
  return bundle;
}

void WriteHrtfSet(const HrtfSet& set, const std::filesystem::path& path) {
  set.Validate();
  if (!set.spectra) throw Error(ErrorCode::kInvalidArgument, "HRTF set files store complex spectra");
  const ComplexSpectra& sp = *set.spectra;
  internal::ByteWriter w;
  w.Bytes(kHrtfSetMagic);
  w.U16(kHrtfSetVersion);
  w.U32(static_cast<std::uint32_t>(sp.subjects()));
  w.U32(static_cast<std::uint32_t>(sp.positions()));
  w.U32(static_cast<std::uint32_t>(sp.channels()));
  w.U32(static_cast<std::uint32_t>(sp.bins()));
  w.F64(set.bin_spacing_hz);
  for (const auto& id : set.subjects) w.String(id);
  WritePositions(w, set.positions);
  for (const Complex& v : sp.data()) {
    w.F64(v.real());
    w.F64(v.imag());
  }
  internal::WriteFileAtomic(path, w.buffer());
}

HrtfSet ReadHrtfSet(const std::filesystem::path& path) {
  internal::ByteReader r(internal::ReadFileBytes(path));
  if (r.Bytes(std::min<std::size_t>(r.remaining(), kHrtfSetMagic.size())) != kHrtfSetMagic) {
    throw Error(ErrorCode::kFormatError, "bad magic at byte offset 0, expected HRTFS1");
  }
  CheckVersion(r, kHrtfSetVersion);
  const std::uint32_t S = r.U32();
  const std::uint32_t B = r.U32();
  const std::uint32_t C = r.U32();
  const std::uint32_t L = r.U32();
  HrtfSet set;
  set.bin_spacing_hz = r.F64();
  set.subjects = ReadSubjects(r, S);
  set.positions = ReadPositions(r, B);
  ComplexSpectra sp(S, B, C, L);
  r.Need(sp.data().size() * 16);
  for (Complex& v : sp.data()) {
    const double re = r.F64();
    v = Complex(re, r.F64());
  }
  if (!r.AtEnd()) r.Fail("trailing bytes after payload");
  set.spectra = std::move(sp);
  UpdateLogMagnitudes(set);
  set.Validate();
  return set;
}

HrtfSet LoadHrtfSet(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::string magic(kHrtfSetMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  in.close();
  if (magic == kHrtfSetMagic) return ReadHrtfSet(path);
  HrirBundle bundle = ReadBundle(path);
  return HrirToHrtf(ResampleHrirs(bundle, kTrainingSampleRate));
}

}  // namespace hrtfup
