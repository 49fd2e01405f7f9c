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

#ifndef HRTFUP_CHECKPOINT_H_
#define HRTFUP_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hrtfup/adam.h"
#include "hrtfup/tensor.h"

namespace hrtfup::nn {

inline constexpr std::uint16_t kCheckpointVersion = 1;

// Everything needed to rebuild a model and resume its optimizer bit for bit.
struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Tensor>> tensors;
  std::optional<AdamState> adam;
  std::string rng_state;

  const Tensor& Find(const std::string& name) const;
  const std::string& Meta(const std::string& key) const;
};

// Layout in docs/checkpoint_format.md. Written atomically.
void WriteCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws Error(kFormatError) with the byte offset, or Error(kIoError).
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

}  // namespace hrtfup::nn

#endif  // HRTFUP_CHECKPOINT_H_
