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

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace trinity::geo {

// Spherical Web Mercator (EPSG:3857) grid constants. Pixels are cells of the
// zoom-24 grid; storage and inference tiles are zoom-16 cells holding
// 256x256 pixels.
inline constexpr int kPixelZoom = 24;
inline constexpr int kTileZoom = 16;
inline constexpr std::uint32_t kTileSize = 256;
inline constexpr std::uint32_t kTilePixels = kTileSize * kTileSize;
inline constexpr double kMaxLatitude = 85.05112878;
inline constexpr double kEquatorMeters = 40075016.686;

struct LatLon {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

struct PixelCoord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

// Zoom-16 tile index. The default ordering is lexicographic on (x, y).
struct TileKey {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend auto operator<=>(const TileKey&, const TileKey&) = default;

  std::string ToString() const;  // "x/y"
};

// Axis-aligned lon/lat box. `min` holds the west/south corner.
struct BBox {
  LatLon min;
  LatLon max;
};

// Continuous position in the unit square: x grows east, y grows south.
struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
};

// Throws DomainError unless lon is in [-180, 180] and lat in
// [-kMaxLatitude, kMaxLatitude], both finite.
void ValidateLatLon(const LatLon& p);

WorldPoint ProjectToWorld(const LatLon& p);
LatLon UnprojectFromWorld(const WorldPoint& w);

// Continuous (unfloored) grid position at `zoom`; pixel (i, j) spans
// [i, i+1) x [j, j+1).
WorldPoint LonLatToGrid(const LatLon& p, int zoom);

// Grid cell containing p at `zoom`, clamped to [0, 2^zoom - 1].
PixelCoord LonLatToPixel(const LatLon& p, int zoom);

// Top-left corner of the cell.
LatLon PixelToLonLat(const PixelCoord& px, int zoom);

// Lon/lat of an arbitrary continuous grid position (e.g. a cell corner at
// x + 1 on the last column).
LatLon GridToLonLat(double gx, double gy, int zoom);

struct TileLocal {
  TileKey tile;
  std::uint32_t local_index = 0;  // (y % 256) * 256 + (x % 256)

  friend bool operator==(const TileLocal&, const TileLocal&) = default;
};

TileLocal PixelToTile(const PixelCoord& px);
PixelCoord TileLocalToPixel(const TileKey& tile, std::uint32_t local_index);

// Every tile at `zoom` intersecting the box, in row-major order (y, then x).
std::vector<TileKey> TilesCovering(const BBox& bbox, int zoom = kTileZoom);

double GroundResolution(double lat_deg, int zoom);

// Ordering used where tiles must be listed row by row.
inline bool RowMajorLess(const TileKey& a, const TileKey& b) {
  return std::pair(a.y, a.x) < std::pair(b.y, b.x);
}

}  // namespace trinity::geo
