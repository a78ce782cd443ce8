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
#include <span>
#include <vector>

#include "trinity/geo/projection.hpp"

namespace trinity::store {

// One 256x256 channel over a tile, row-major (index = row * 256 + col).
class ChannelPlane {
 public:
  static constexpr std::uint32_t kSide = geo::kTileSize;
  static constexpr std::uint32_t kSize = geo::kTilePixels;

  ChannelPlane() : values_(kSize, 0.0f) {}

  float& at(std::uint32_t row, std::uint32_t col) { return values_[row * kSide + col]; }
  float at(std::uint32_t row, std::uint32_t col) const {
    return values_[row * kSide + col];
  }
  float& operator[](std::size_t i) { return values_[i]; }
  float operator[](std::size_t i) const { return values_[i]; }

  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }

  friend bool operator==(const ChannelPlane&, const ChannelPlane&) = default;

 private:
  std::vector<float> values_;
};

}  // namespace trinity::store
