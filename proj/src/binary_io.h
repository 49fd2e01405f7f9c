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

#ifndef HRTFUP_SRC_BINARY_IO_H_
#define HRTFUP_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hrtfup/error.h"

namespace hrtfup::internal {

// Little-endian encoder into an in-memory buffer.
class ByteWriter {
 public:
  void Bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void U16(std::uint16_t v) { Pack(v, 2); }
  void U32(std::uint32_t v) { Pack(v, 4); }
  void U64(std::uint64_t v) { Pack(v, 8); }
  void F64(double v) { Pack(std::bit_cast<std::uint64_t>(v), 8); }
  void String(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    Bytes(s);
  }
  const std::vector<char>& buffer() const { return buf_; }

 private:
  void Pack(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::vector<char> buf_;
};

// Little-endian decoder; every failure names the byte offset.
class ByteReader {
 public:
  explicit ByteReader(std::vector<char> data) : data_(std::move(data)) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool AtEnd() const { return pos_ == data_.size(); }

  std::string Bytes(std::size_t n) {
    Need(n);
    std::string s(data_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Unpack(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Unpack(4)); }
  std::uint64_t U64() { return Unpack(8); }
  double F64() { return std::bit_cast<double>(Unpack(8)); }
  std::string String() {
    const std::uint32_t n = U32();
    return Bytes(n);
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kFormatError,
                what + " at byte offset " + std::to_string(pos_));
  }

  void Need(std::size_t n) const {
    if (remaining() < n) {
      Fail("truncated file: need " + std::to_string(n) + " bytes, have " +
           std::to_string(remaining()));
    }
  }

 private:
  std::uint64_t Unpack(int n) {
    Need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::vector<char> data_;
  std::size_t pos_ = 0;
};

std::vector<char> ReadFileBytes(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over path.
void WriteFileAtomic(const std::filesystem::path& path, const std::vector<char>& bytes);

}  // namespace hrtfup::internal

#endif  // HRTFUP_SRC_BINARY_IO_H_
