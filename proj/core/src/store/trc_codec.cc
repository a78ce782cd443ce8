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

#include "trinity/store/trc_codec.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "trinity/error.hpp"
#include "trinity/util/binary_io.hpp"

namespace trinity::store {
namespace {

constexpr std::string_view kMagic = "TRNC";
constexpr std::uint32_t kMaxTileIndex = (1u << geo::kTileZoom) - 1;

TrcHeader ReadHeader(util::ByteReader& in) {
  if (in.Bytes(4) != kMagic) throw ValidationError("trc: bad magic");
  TrcHeader h;
  h.version = in.U16();
  if (h.version != kTrcVersion) {
    throw ValidationError("trc: unsupported version " + std::to_string(h.version));
  }
  h.tile_zoom = in.U8();
  if (h.tile_zoom != geo::kTileZoom) {
    throw ValidationError("trc: tile zoom must be 16");
  }
  if (in.U8() != 0) throw ValidationError("trc: reserved byte must be 0");
  h.tile.x = in.U32();
  h.tile.y = in.U32();
  if (h.tile.x > kMaxTileIndex || h.tile.y > kMaxTileIndex) {
    throw ValidationError("trc: tile index out of range");
  }
  h.channel_count = in.U16();
  return h;
}

}  // namespace

void ValidateRecord(const SparseTileRecord& record) {
  if (record.tile.x > kMaxTileIndex || record.tile.y > kMaxTileIndex) {
    throw ValidationError("tile " + record.tile.ToString() + " outside the zoom-16 grid");
  }
  if (record.channels.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ValidationError("too many channels");
  }
  for (std::size_t c = 0; c < record.channels.size(); ++c) {
    const auto& ch = record.channels[c];
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (i > 0 && ch[i].index <= ch[i - 1].index) {
        throw ValidationError("channel " + std::to_string(c) +
                              ": pixel indices not strictly increasing");
      }
      if (!std::isfinite(ch[i].value)) {
        throw ValidationError("channel " + std::to_string(c) + ": non-finite value");
      }
    }
  }
}

std::vector<std::uint8_t> EncodeTrc(const SparseTileRecord& record) {
  ValidateRecord(record);
  util::ByteWriter out;
  out.Bytes(kMagic);
  out.U16(kTrcVersion);
  out.U8(geo::kTileZoom);
  out.U8(0);
  out.U32(record.tile.x);
  out.U32(record.tile.y);
  out.U16(static_cast<std::uint16_t>(record.channels.size()));
  for (const auto& ch : record.channels) {
    out.U32(static_cast<std::uint32_t>(ch.size()));
    for (const auto& e : ch) {
      out.U16(e.index);
      out.F32(e.value);
    }
  }
  return out.Take();
}

SparseTileRecord DecodeTrc(std::span<const std::uint8_t> bytes) {
  util::ByteReader in(bytes, "trc");
  const TrcHeader h = ReadHeader(in);
  SparseTileRecord rec;
  rec.tile = h.tile;
  rec.channels.resize(h.channel_count);
  for (auto& ch : rec.channels) {
    const std::uint32_t nnz = in.U32();
    if (nnz > geo::kTilePixels) throw ValidationError("trc: nnz exceeds tile size");
    ch.resize(nnz);
    for (auto& e : ch) {
      e.index = in.U16();
      e.value = in.F32();
    }
  }
  if (!in.AtEnd()) throw ValidationError("trc: trailing bytes");
  ValidateRecord(rec);
  return rec;
}

TrcHeader InspectTrc(std::span<const std::uint8_t> bytes) {
  util::ByteReader in(bytes, "trc");
  TrcHeader h = ReadHeader(in);
  for (std::uint16_t c = 0; c < h.channel_count; ++c) {
    const std::uint32_t nnz = in.U32();
    h.nnz.push_back(nnz);
    in.Bytes(static_cast<std::size_t>(nnz) * 6);
  }
  return h;
}

ChannelPlane Densify(const SparseChannel& channel) {
  ChannelPlane plane;
  for (const auto& e : channel) plane[e.index] = e.value;
  return plane;
}

SparseChannel Sparsify(const ChannelPlane& plane) {
  SparseChannel out;
  for (std::uint32_t i = 0; i < ChannelPlane::kSize; ++i) {
    if (plane[i] != 0.0f) out.push_back({static_cast<std::uint16_t>(i), plane[i]});
  }
  return out;
}

}  // namespace trinity::store
