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

#include "trinity/geo/wkt.hpp"

namespace trinity::labels {

// Per-task 256x256 class-index plane, row-major.
using LabelPlane = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kIgnore = 255;
inline constexpr int kMaxClassCount = 255;

// Tag painted for geometries that carry no class tag.
inline constexpr int kDefaultClassTag = 1;

// Continuous zoom-24 position relative to the tile's top-left pixel corner.
struct LocalPoint {
  double x = 0.0;
  double y = 0.0;
};

LocalPoint ToTileLocal(const geo::LatLon& p, const geo::TileKey& tile);

// Pixel lying on the digital segment between two zoom-24 pixels: the
// endpoints are ordered along the major axis and the minor coordinate is
// rounded half up, giving an 8-connected trace that includes both ends.
// Returns the minor coordinate at `major`, or nothing outside the span.
struct DigitalSegment {
  std::int64_t x0, y0, x1, y1;
  bool x_major;

  static DigitalSegment Between(geo::PixelCoord a, geo::PixelCoord b);
  bool Contains(std::int64_t x, std::int64_t y) const;
};

// Paints geometries onto a zero plane, later geometries overwriting earlier
// ones. Polygons fill pixels whose centers pass the even-odd test over the
// polygon's rings; linestrings paint their digital segments; points paint
// the pixel containing them. Throws ValidationError if a tag lies outside
// [1, class_count - 1].
LabelPlane Rasterize(std::span<const geo::Geometry> geometries, const geo::TileKey& tile,
                     int class_count);

// True if the geometry's zoom-24 pixel bounds overlap the tile.
bool TouchesTile(const geo::Geometry& g, const geo::TileKey& tile);

}  // namespace trinity::labels
