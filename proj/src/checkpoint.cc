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

#include "hrtfup/checkpoint.h"

#include "binary_io.h"
#include "hrtfup/error.h"

namespace hrtfup::nn {
namespace {

constexpr std::string_view kMagic = "HAECK1";

void WriteTensor(internal::ByteWriter& w, const Tensor& t) {
  w.U32(static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.shape()) w.U64(d);
  for (double v : t.values()) w.F64(v);
}

Tensor ReadTensor(internal::ByteReader& r) {
  const std::uint32_t rank = r.U32();
  if (rank > 8) r.Fail("tensor rank " + std::to_string(rank) + " too large");
  Shape shape(rank);
  for (auto& d : shape) d = r.U64();
  const std::size_t n = NumElements(shape);
  r.Need(n * 8);
  std::vector<double> data(n);
  for (double& v : data) v = r.F64();
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace

const Tensor& Checkpoint::Find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw Error(ErrorCode::kFormatError, "checkpoint has no tensor " + name);
}

const std::string& Checkpoint::Meta(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) throw Error(ErrorCode::kFormatError, "checkpoint has no metadata key " + key);
  return it->second;
}

void WriteCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  internal::ByteWriter w;
  w.Bytes(kMagic);
  w.U16(kCheckpointVersion);
  w.U32(static_cast<std::uint32_t>(ckpt.metadata.size()));
  for (const auto& [k, v] : ckpt.metadata) {
    w.String(k);
    w.String(v);
  }
  w.U32(static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    w.String(name);
    WriteTensor(w, t);
  }
  w.U32(ckpt.adam ? 1 : 0);
  if (ckpt.adam) {
    if (ckpt.adam->first_moment.size() != ckpt.adam->second_moment.size()) {
      throw Error(ErrorCode::kShapeMismatch, "Adam moment lists differ in length");
    }
    w.U64(static_cast<std::uint64_t>(ckpt.adam->step));
    w.U32(static_cast<std::uint32_t>(ckpt.adam->first_moment.size()));
    for (std::size_t i = 0; i < ckpt.adam->first_moment.size(); ++i) {
      WriteTensor(w, ckpt.adam->first_moment[i]);
      WriteTensor(w, ckpt.adam->second_moment[i]);
    }
  }
  w.String(ckpt.rng_state);
  internal::WriteFileAtomic(path, w.buffer());
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  internal::ByteReader r(internal::ReadFileBytes(path));
  if (r.Bytes(std::min<std::size_t>(r.remaining(), kMagic.size())) != kMagic) {
    throw Error(ErrorCode::kFormatError, "bad magic at byte offset 0, expected HAECK1");
  }
  const std::size_t at = r.offset();
  const std::uint16_t version = r.U16();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kFormatError, "version mismatch at byte offset " + std::to_string(at) +
                                             ": expected " + std::to_string(kCheckpointVersion) +
                                             ", found " + std::to_string(version));
  }
  Checkpoint ckpt;
  const std::uint32_t n_meta = r.U32();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string k = r.String();
    ckpt.metadata[k] = r.String();
  }
  const std::uint32_t n_tensors = r.U32();
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = r.String();
    ckpt.tensors.emplace_back(std::move(name), ReadTensor(r));
  }
  if (r.U32() != 0) {
    AdamState s;
    s.step = static_cast<std::int64_t>(r.U64());
    const std::uint32_t n = r.U32();
    for (std::uint32_t i = 0; i < n; ++i) {
      s.first_moment.push_back(ReadTensor(r));
      s.second_moment.push_back(ReadTensor(r));
    }
    ckpt.adam = std::move(s);
  }
  ckpt.rng_state = r.String();
  if (!r.AtEnd()) r.Fail("trailing bytes after checkpoint");
  return ckpt;
}

}  // namespace hrtfup::nn
