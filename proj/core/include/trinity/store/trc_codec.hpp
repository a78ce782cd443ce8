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
#include "trinity/store/channel_plane.hpp"

namespace trinity::store {

struct SparseEntry {
  std::uint16_t index = 0;  // row * 256 + col
  float value = 0.0f;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

using SparseChannel = std::vector<SparseEntry>;

struct SparseTileRecord {
  geo::TileKey tile;
  std::vector<SparseChannel> channels;

  friend bool operator==(const SparseTileRecord&, const SparseTileRecord&) = default;
};

// Sparse tile file (.trc), little-endian:
//   "TRNC" | version u16 = 1 | tile_zoom u8 = 16 | reserved u8 = 0 |
//   tile_x u32 | tile_y u32 | channel_count u16 |
//   per channel: nnz u32, then nnz x (pixel_index u16, value f32)
inline constexpr std::uint16_t kTrcVersion = 1;

struct TrcHeader {
  std::uint16_t version = kTrcVersion;
  std::uint8_t tile_zoom = geo::kTileZoom;
  geo::TileKey tile;
  std::uint16_t channel_count = 0;
  std::vector<std::uint32_t> nnz;  // per channel
};

// Throws ValidationError on unsorted indices, non-finite values or an
// out-of-range tile key.
void ValidateRecord(const SparseTileRecord& record);

std::vector<std::uint8_t> EncodeTrc(const SparseTileRecord& record);
SparseTileRecord DecodeTrc(std::span<const std::uint8_t> bytes);
TrcHeader InspectTrc(std::span<const std::uint8_t> bytes);

ChannelPlane Densify(const SparseChannel& channel);

// Keeps entries whose value compares unequal to zero.
SparseChannel Sparsify(const ChannelPlane& plane);

}  // namespace trinity::store
