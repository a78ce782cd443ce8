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
#include <span>
#include <vector>

#include "trinity/geo/projection.hpp"
#include "trinity/kernel/tensor.hpp"

namespace trinity::inference {

inline constexpr std::uint16_t kTrhmVersion = 1;

// Per-pixel class confidences for one tile; tasks[t] is class_count x 256 x 256.
struct Heatmap {
  geo::TileKey tile;
  std::vector<kernel::Tensor<float>> tasks;

  friend bool operator==(const Heatmap&, const Heatmap&) = default;
};

struct TrhmHeader {
  std::uint16_t version = kTrhmVersion;
  geo::TileKey tile;
  std::vector<std::uint16_t> class_counts;
};

// "TRHM" | u16 version | u32 x | u32 y | u16 task count | u16 class count per
// task | f32 LE confidences, task-major, class-major, row-major.
std::vector<std::uint8_t> EncodeHeatmap(const Heatmap& heatmap);
Heatmap DecodeHeatmap(std::span<const std::uint8_t> bytes);
TrhmHeader InspectHeatmap(std::span<const std::uint8_t> bytes);

Heatmap LoadHeatmap(const std::filesystem::path& path);

// <dir>/16/<x>/<y>.trhm
std::filesystem::path HeatmapPath(const std::filesystem::path& dir, const geo::TileKey& tile);

}  // namespace trinity::inference
