/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/kernel/adam.hpp"
#include "trinity/kernel/model.hpp"

namespace trinity::kernel {

inline constexpr std::uint16_t kTrnkVersion = 1;

struct Checkpoint {
  ModelSpec spec;
  int epoch = 0;
  nlohmann::json metrics = nlohmann::json::object();
  Parameters<float> parameters;
  std::optional<AdamState> optimizer;
};

// Layout: "TRNK" | u16 version | u32 header length | UTF-8 JSON header |
// f32 LE payload. The header holds spec, epoch, metrics and a directory of
// {name, dims, offset} entries whose offsets are relative to the payload
// start; optimizer moments appear as "<param>/adam_m" and "<param>/adam_v".
std::vector<std::uint8_t> EncodeCheckpoint(const Checkpoint& ckpt);
Checkpoint DecodeCheckpoint(std::span<const std::uint8_t> bytes);

// Parsed JSON header only, for inspection tools.
nlohmann::json InspectCheckpoint(std::span<const std::uint8_t> bytes);

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace trinity::kernel
