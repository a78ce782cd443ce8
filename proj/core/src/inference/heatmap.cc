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

#include "trinity/inference/heatmap.hpp"

#include "trinity/error.hpp"
#include "trinity/util/binary_io.hpp"
#include "trinity/util/fs.hpp"

namespace trinity::inference {
namespace {

constexpr std::string_view kMagic = "TRHM";
constexpr int kSide = static_cast<int>(geo::kTileSize);

TrhmHeader ReadHeader(util::ByteReader& in) {
  if (in.Bytes(4) != kMagic) throw ValidationError("trhm: bad magic");
  TrhmHeader h;
  h.version = in.U16();
  if (h.version != kTrhmVersion) {
    throw ValidationError("trhm: unsupported version " + std::to_string(h.version));
  }
  h.tile.x = in.U32();
  h.tile.y = in.U32();
  if (h.tile.x >= (1u << geo::kTileZoom) || h.tile.y >= (1u << geo::kTileZoom)) {
    throw ValidationError("trhm: tile index out of range");
  }
  const std::uint16_t tasks = in.U16();
  for (std::uint16_t t = 0; t < tasks; ++t) {
    h.class_counts.push_back(in.U16());
    if (h.class_counts.back() < 2) throw ValidationError("trhm: class count below 2");
  }
  return h;
}

}  // namespace

std::vector<std::uint8_t> EncodeHeatmap(const Heatmap& heatmap) {
  util::ByteWriter out;
  out.Bytes(kMagic);
  out.U16(kTrhmVersion);
  out.U32(heatmap.tile.x);
  out.U32(heatmap.tile.y);
  out.U16(static_cast<std::uint16_t>(heatmap.tasks.size()));
  for (const auto& t : heatmap.tasks) {
    if (t.height != kSide || t.width != kSide) throw ValidationError("trhm: planes must be 256x256");
    out.U16(static_cast<std::uint16_t>(t.channels));
  }
  for (const auto& t : heatmap.tasks) {
    for (float v : t.data) out.F32(v);
  }
  return out.Take();
}

TrhmHeader InspectHeatmap(std::span<const std::uint8_t> bytes) {
  util::ByteReader in(bytes, "trhm");
  return ReadHeader(in);
}

Heatmap DecodeHeatmap(std::span<const std::uint8_t> bytes) {
  util::ByteReader in(bytes, "trhm");
  const TrhmHeader h = ReadHeader(in);
  Heatmap hm;
  hm.tile = h.tile;
  for (auto k : h.class_counts) {
    kernel::Tensor<float> t(k, kSide, kSide);
    for (auto& v : t.data) v = in.F32();
    hm.tasks.push_back(std::move(t));
  }
  if (!in.AtEnd()) throw ValidationError("trhm: trailing bytes");
  return hm;
}

Heatmap LoadHeatmap(const std::filesystem::path& path) {
  return DecodeHeatmap(util::ReadBinaryFile(path));
}

std::filesystem::path HeatmapPath(const std::filesystem::path& dir, const geo::TileKey& tile) {
  return dir / std::to_string(geo::kTileZoom) / std::to_string(tile.x) /
         (std::to_string(tile.y) + ".trhm");
}

}  // namespace trinity::inference
