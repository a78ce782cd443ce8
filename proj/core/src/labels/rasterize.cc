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

#include "trinity/labels/rasterize.hpp"

#include <algorithm>
#include <cmath>

#include "trinity/error.hpp"

namespace trinity::labels {
namespace {

constexpr int kSide = static_cast<int>(geo::kTileSize);

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int ResolveTag(const geo::Geometry& g, int class_count) {
  const int tag = g.class_tag.value_or(kDefaultClassTag);
  if (tag < 1 || tag >= class_count) {
    throw ValidationError("class tag " + std::to_string(tag) + " outside [1, " +
                          std::to_string(class_count - 1) + "]");
  }
  return tag;
}

void PaintPoint(LabelPlane& plane, const geo::LatLon& p, const geo::TileKey& tile,
                std::uint8_t tag) {
  const auto local = geo::PixelToTile(geo::LonLatToPixel(p, geo::kPixelZoom));
  if (local.tile == tile) plane[local.local_index] = tag;
}

void PaintSegment(LabelPlane& plane, const DigitalSegment& seg, const geo::TileKey& tile,
                  std::uint8_t tag) {
  const std::int64_t tx0 = std::int64_t{tile.x} * kSide;
  const std::int64_t ty0 = std::int64_t{tile.y} * kSide;
  const std::int64_t major_lo = seg.x_major ? std::max(seg.x0, tx0) : std::max(seg.y0, ty0);
  const std::int64_t major_hi =
      seg.x_major ? std::min(seg.x1, tx0 + kSide - 1) : std::min(seg.y1, ty0 + kSide - 1);
  for (std::int64_t m = major_lo; m <= major_hi; ++m) {
    std::int64_t x, y;
    if (seg.x_major) {
      x = m;
      const std::int64_t dx = seg.x1 - seg.x0;
      y = dx == 0 ? seg.y0
                  : seg.y0 + FloorDiv(2 * (m - seg.x0) * (seg.y1 - seg.y0) + dx, 2 * dx);
    } else {
      y = m;
      const std::int64_t dy = seg.y1 - seg.y0;
      x = dy == 0 ? seg.x0
                  : seg.x0 + FloorDiv(2 * (m - seg.y0) * (seg.x1 - seg.x0) + dy, 2 * dy);
    }
    if (x < tx0 || x >= tx0 + kSide || y < ty0 || y >= ty0 + kSide) continue;
    plane[static_cast<std::size_t>((y - ty0) * kSide + (x - tx0))] = tag;
  }
}

// Scanline fill equivalent to the per-pixel crossing test: a center c is
// inside iff an odd number of edge crossings lie strictly right of it, i.e.
// a[2k] <= c < a[2k+1] over the sorted crossings.
void PaintPolygon(LabelPlane& plane, const geo::Polygon& poly, const geo::TileKey& tile,
                  std::uint8_t tag) {
  std::vector<std::vector<LocalPoint>> rings;
  rings.reserve(1 + poly.holes.size());
  auto convert = [&tile](const geo::Ring& ring) {
    std::vector<LocalPoint> out;
    out.reserve(ring.size());
    for (const auto& p : ring) out.push_back(ToTileLocal(p, tile));
    return out;
  };
  rings.push_back(convert(poly.outer));
  for (const auto& hole : poly.holes) rings.push_back(convert(hole));

  double ymin = rings[0][0].y, ymax = ymin;
  for (const auto& ring : rings) {
    for (const auto& p : ring) {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const int row_lo = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
  const int row_hi = std::min(kSide - 1, static_cast<int>(std::ceil(ymax)));

  std::vector<double> xs;
  for (int row = row_lo; row <= row_hi; ++row) {
    const double yc = row + 0.5;
    xs.clear();
    for (const auto& ring : rings) {
      for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const LocalPoint& a = ring[i];
        const LocalPoint& b = ring[j];
        if ((a.y > yc) != (b.y > yc)) {
          xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
        }
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double lo = xs[k], hi = xs[k + 1];
      if (hi <= 0.0 || lo >= kSide) continue;
      int c = std::max(0, static_cast<int>(std::floor(std::max(lo, -1.0) - 0.5)));
      while (c < kSide && c + 0.5 < lo) ++c;
      for (; c < kSide && c + 0.5 < hi; ++c) {
        plane[static_cast<std::size_t>(row * kSide + c)] = tag;
      }
    }
  }
}

}  // namespace

LocalPoint ToTileLocal(const geo::LatLon& p, const geo::TileKey& tile) {
  const geo::WorldPoint g = geo::LonLatToGrid(p, geo::kPixelZoom);
  return {g.x - static_cast<double>(tile.x) * kSide,
          g.y - static_cast<double>(tile.y) * kSide};
}

DigitalSegment DigitalSegment::Between(geo::PixelCoord a, geo::PixelCoord b) {
  DigitalSegment s{a.x, a.y, b.x, b.y, false};
  const std::int64_t adx = std::abs(s.x1 - s.x0);
  const std::int64_t ady = std::abs(s.y1 - s.y0);
  s.x_major = adx >= ady;
  const bool swap = s.x_major ? s.x0 > s.x1 : s.y0 > s.y1;
  if (swap) {
    std::swap(s.x0, s.x1);
    std::swap(s.y0, s.y1);
  }
  return s;
}

bool DigitalSegment::Contains(std::int64_t x, std::int64_t y) const {
  if (x_major) {
    if (x < x0 || x > x1) return false;
    const std::int64_t dx = x1 - x0;
    const std::int64_t yy = dx == 0 ? y0 : y0 + FloorDiv(2 * (x - x0) * (y1 - y0) + dx, 2 * dx);
    return yy == y;
  }
  if (y < y0 || y > y1) return false;
  const std::int64_t dy = y1 - y0;
  const std::int64_t xx = dy == 0 ? x0 : x0 + FloorDiv(2 * (y - y0) * (x1 - x0) + dy, 2 * dy);
  return xx == x;
}

bool TouchesTile(const geo::Geometry& g, const geo::TileKey& tile) {
  const geo::BBox b = geo::BoundsOf(g);
  const geo::PixelCoord nw = geo::LonLatToPixel({b.min.lon, b.max.lat}, geo::kPixelZoom);
  const geo::PixelCoord se = geo::LonLatToPixel({b.max.lon, b.min.lat}, geo::kPixelZoom);
  const std::uint32_t tx0 = tile.x * geo::kTileSize, ty0 = tile.y * geo::kTileSize;
  const std::uint32_t tx1 = tx0 + geo::kTileSize - 1, ty1 = ty0 + geo::kTileSize - 1;
  return !(se.x < tx0 || nw.x > tx1 || se.y < ty0 || nw.y > ty1);
}

LabelPlane Rasterize(std::span<const geo::Geometry> geometries, const geo::TileKey& tile,
                     int class_count) {
  if (class_count < 2 || class_count > kMaxClassCount) {
    throw ValidationError("class_count must be in [2, 255]");
  }
  LabelPlane plane(geo::kTilePixels, 0);
  for (const auto& g : geometries) {
    const auto tag = static_cast<std::uint8_t>(ResolveTag(g, class_count));
    if (!TouchesTile(g, tile)) continue;
    switch (g.kind) {
      case geo::GeometryKind::kPoint:
        PaintPoint(plane, g.vertices.at(0), tile, tag);
        break;
      case geo::GeometryKind::kLineString:
        for (std::size_t i = 0; i + 1 < g.vertices.size(); ++i) {
          const auto seg = DigitalSegment::Between(
              geo::LonLatToPixel(g.vertices[i], geo::kPixelZoom),
              geo::LonLatToPixel(g.vertices[i + 1], geo::kPixelZoom));
          PaintSegment(plane, seg, tile, tag);
        }
        break;
      case geo::GeometryKind::kPolygon:
      case geo::GeometryKind::kMultiPolygon:
        for (const auto& poly : g.polygons) PaintPolygon(plane, poly, tile, tag);
        break;
    }
  }
  return plane;
}

}  // namespace trinity::labels
