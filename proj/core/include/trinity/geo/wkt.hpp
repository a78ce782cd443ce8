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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trinity/geo/projection.hpp"

namespace trinity::geo {

enum class GeometryKind { kPoint, kLineString, kPolygon, kMultiPolygon };

const char* GeometryKindName(GeometryKind kind);

using Ring = std::vector<LatLon>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

// Points and linestrings use `vertices`; polygons and multipolygons use
// `polygons` (exactly one entry for a polygon).
struct Geometry {
  GeometryKind kind = GeometryKind::kPoint;
  std::vector<LatLon> vertices;
  std::vector<Polygon> polygons;
  std::optional<int> class_tag;

  friend bool operator==(const Geometry&, const Geometry&) = default;

  static Geometry Point(LatLon p, std::optional<int> tag = std::nullopt);
  static Geometry LineString(std::vector<LatLon> pts,
                             std::optional<int> tag = std::nullopt);
  static Geometry FromPolygon(Polygon poly, std::optional<int> tag = std::nullopt);
};

// One non-blank input line: the geometry plus any tab-separated suffix
// fields that followed it.
struct WktRecord {
  Geometry geometry;
  std::vector<std::string> suffix;
  std::size_t line = 0;
};

// Enforces closed rings with >= 3 distinct vertices, >= 2 linestring
// vertices and in-bounds coordinates. Throws ValidationError.
void ValidateGeometry(const Geometry& g);

// Parses a single WKT geometry (no suffix). `line` is used in error messages.
Geometry ParseWktGeometry(std::string_view text, std::size_t line = 1);

// One geometry per line; blank lines and lines starting with '#' are
// skipped. Suffix fields are returned verbatim.
std::vector<WktRecord> ParseWktRecords(std::string_view text);

// As ParseWktRecords, interpreting the first suffix field as a
// non-negative integer class tag.
std::vector<Geometry> ParseWkt(std::string_view text);

// Shortest round-trip decimal form of every coordinate.
std::string SerializeWkt(const Geometry& g);

// SerializeWkt plus "\t<class_tag>" when a tag is present.
std::string SerializeWktLine(const Geometry& g);

BBox BoundsOf(const Geometry& g);

std::string FormatDouble(double v);

}  // namespace trinity::geo
