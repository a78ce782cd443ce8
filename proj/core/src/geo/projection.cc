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

#include "trinity/geo/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trinity/error.hpp"

namespace trinity::geo {
namespace {

// Grid positions within this many cells below an integer boundary are
// treated as on the boundary. Absorbs the last-ulp error of the
// forward/inverse trigonometric chain so cell corners round-trip exactly.
constexpr double kSnapTolerance = 1e-6;

void ValidateZoom(int zoom) {
  if (zoom < 0 || zoom > kPixelZoom) {
    throw DomainError("zoom " + std::to_string(zoom) + " outside [0, 24]");
  }
}

double CellCount(int zoom) { return std::ldexp(1.0, zoom); }

std::uint32_t SnapFloor(double v, std::uint32_t max_index) {
  double cell = std::floor(v);
  if (cell + 1.0 - v < kSnapTolerance) cell += 1.0;
  if (cell < 0.0) return 0;
  if (cell > static_cast<double>(max_index)) return max_index;
  return static_cast<std::uint32_t>(cell);
}

}  // namespace

std::string TileKey::ToString() const {
  return std::to_string(x) + "/" + std::to_string(y);
}

void ValidateLatLon(const LatLon& p) {
  if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) {
    throw DomainError("non-finite coordinate");
  }
  if (p.lon < -180.0 || p.lon > 180.0) {
    throw DomainError("longitude " + std::to_string(p.lon) + " outside [-180, 180]");
  }
  if (p.lat < -kMaxLatitude || p.lat > kMaxLatitude) {
    throw DomainError("latitude " + std::to_string(p.lat) +
                      " outside the Mercator limit");
  }
}

WorldPoint ProjectToWorld(const LatLon& p) {
  const double phi = p.lat * std::numbers::pi / 180.0;
  WorldPoint w;
  w.x = (p.lon + 180.0) / 360.0;
  w.y = (1.0 - std::log(std::tan(phi) + 1.0 / std::cos(phi)) / std::numbers::pi) / 2.0;
  return w;
}

LatLon UnprojectFromWorld(const WorldPoint& w) {
  LatLon p;
  p.lon = w.x * 360.0 - 180.0;
  p.lat = std::atan(std::sinh(std::numbers::pi * (1.0 - 2.0 * w.y))) * 180.0 /
          std::numbers::pi;
  return p;
}

WorldPoint LonLatToGrid(const LatLon& p, int zoom) {
  ValidateZoom(zoom);
  ValidateLatLon(p);
  const double n = CellCount(zoom);
  WorldPoint w = ProjectToWorld(p);
  return {w.x * n, w.y * n};
}

PixelCoord LonLatToPixel(const LatLon& p, int zoom) {
  const WorldPoint g = LonLatToGrid(p, zoom);
  const std::uint32_t max_index = (std::uint32_t{1} << zoom) - 1;
  return {SnapFloor(g.x, max_index), SnapFloor(g.y, max_index)};
}

LatLon GridToLonLat(double gx, double gy, int zoom) {
  ValidateZoom(zoom);
  const double n = CellCount(zoom);
  if (!(gx >= 0.0 && gx <= n && gy >= 0.0 && gy <= n)) {
    throw DomainError("grid position outside the zoom-" + std::to_string(zoom) +
                      " extent");
  }
  LatLon p = UnprojectFromWorld({gx / n, gy / n});
  p.lat = std::clamp(p.lat, -kMaxLatitude, kMaxLatitude);
  return p;
}

LatLon PixelToLonLat(const PixelCoord& px, int zoom) {
  ValidateZoom(zoom);
  const std::uint64_t n = std::uint64_t{1} << zoom;
  if (px.x >= n || px.y >= n) {
    throw DomainError("pixel outside the zoom-" + std::to_string(zoom) + " grid");
  }
  return GridToLonLat(px.x, px.y, zoom);
}

TileLocal PixelToTile(const PixelCoord& px) {
  TileLocal out;
  out.tile = {px.x / kTileSize, px.y / kTileSize};
  out.local_index = (px.y % kTileSize) * kTileSize + (px.x % kTileSize);
  return out;
}

PixelCoord TileLocalToPixel(const TileKey& tile, std::uint32_t local_index) {
  return {tile.x * kTileSize + local_index % kTileSize,
          tile.y * kTileSize + local_index / kTileSize};
}

std::vector<TileKey> TilesCovering(const BBox& bbox, int zoom) {
  ValidateLatLon(bbox.min);
  ValidateLatLon(bbox.max);
  if (bbox.min.lon > bbox.max.lon || bbox.min.lat > bbox.max.lat) {
    throw DomainError("inverted bounding box");
  }
  // North-west corner has the smallest grid y.
  const PixelCoord nw = LonLatToPixel({bbox.min.lon, bbox.max.lat}, zoom);
  const PixelCoord se = LonLatToPixel({bbox.max.lon, bbox.min.lat}, zoom);
  std::vector<TileKey> tiles;
  tiles.reserve(static_cast<std::size_t>(se.x - nw.x + 1) * (se.y - nw.y + 1));
  for (std::uint32_t y = nw.y; y <= se.y; ++y) {
    for (std::uint32_t x = nw.x; x <= se.x; ++x) tiles.push_back({x, y});
  }
  return tiles;
}

double GroundResolution(double lat_deg, int zoom) {
  ValidateZoom(zoom);
  if (!std::isfinite(lat_deg) || std::abs(lat_deg) > kMaxLatitude) {
    throw DomainError("latitude outside the Mercator limit");
  }
  return kEquatorMeters * std::cos(lat_deg * std::numbers::pi / 180.0) /
         CellCount(zoom);
}

}  // namespace trinity::geo
