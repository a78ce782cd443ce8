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

#include "trinity/geo/wkt.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <set>

#include "trinity/error.hpp"

namespace trinity::geo {
namespace {

class WktParser {
 public:
  WktParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Geometry Parse() {
    Geometry g;
    const std::string kw = Keyword();
    if (kw == "POINT") {
      g.kind = GeometryKind::kPoint;
      Expect('(');
      g.vertices.push_back(Coordinate());
      Expect(')');
    } else if (kw == "LINESTRING") {
      g.kind = GeometryKind::kLineString;
      g.vertices = CoordinateList();
    } else if (kw == "POLYGON") {
      g.kind = GeometryKind::kPolygon;
      g.polygons.push_back(PolygonBody());
    } else if (kw == "MULTIPOLYGON") {
      g.kind = GeometryKind::kMultiPolygon;
      Expect('(');
      g.polygons.push_back(PolygonBody());
      while (Accept(',')) g.polygons.push_back(PolygonBody());
      Expect(')');
    } else if (kw.empty()) {
      Fail("expected a geometry keyword");
    } else {
      Fail("unsupported geometry type '" + kw + "'");
    }
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing text");
    return g;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) const {
    throw ParseError(line_, msg + " at column " + std::to_string(pos_ + 1));
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string Keyword() {
    SkipSpace();
    std::string out;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_]))));
      ++pos_;
    }
    return out;
  }

  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void Expect(char c) {
    if (!Accept(c)) Fail(std::string("expected '") + c + "'");
  }

  double Number() {
    SkipSpace();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin != end && *begin == '+') ++begin;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) Fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  LatLon Coordinate() {
    LatLon p;
    p.lon = Number();
    p.lat = Number();
    return p;
  }

  std::vector<LatLon> CoordinateList() {
    Expect('(');
    std::vector<LatLon> pts{Coordinate()};
    while (Accept(',')) pts.push_back(Coordinate());
    Expect(')');
    return pts;
  }

  Polygon PolygonBody() {
    Expect('(');
    Polygon poly;
    poly.outer = CoordinateList();
    while (Accept(',')) poly.holes.push_back(CoordinateList());
    Expect(')');
    return poly;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

void ValidateRing(const Ring& ring, const std::string& where) {
  if (ring.size() < 2 || ring.front() != ring.back()) {
    throw ValidationError(where + ": ring is not closed");
  }
  std::set<std::pair<double, double>> distinct;
  for (const auto& p : ring) distinct.emplace(p.lon, p.lat);
  if (distinct.size() < 3) {
    throw ValidationError(where + ": ring has fewer than 3 distinct vertices");
  }
}

void ValidateVertices(const std::vector<LatLon>& pts, const std::string& where) {
  for (const auto& p : pts) {
    try {
      ValidateLatLon(p);
    } catch (const DomainError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
}

void AppendCoords(std::string& out, const std::vector<LatLon>& pts) {
  out.push_back('(');
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ", ";
    out += FormatDouble(pts[i].lon);
    out.push_back(' ');
    out += FormatDouble(pts[i].lat);
  }
  out.push_back(')');
}

void AppendPolygon(std::string& out, const Polygon& poly) {
  out.push_back('(');
  AppendCoords(out, poly.outer);
  for (const auto& hole : poly.holes) {
    out += ", ";
    AppendCoords(out, hole);
  }
  out.push_back(')');
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

void ValidateAt(const Geometry& g, std::size_t line) {
  try {
    ValidateGeometry(g);
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

const char* GeometryKindName(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::kPoint: return "POINT";
    case GeometryKind::kLineString: return "LINESTRING";
    case GeometryKind::kPolygon: return "POLYGON";
    case GeometryKind::kMultiPolygon: return "MULTIPOLYGON";
  }
  return "?";
}

Geometry Geometry::Point(LatLon p, std::optional<int> tag) {
  Geometry g;
  g.kind = GeometryKind::kPoint;
  g.vertices = {p};
  g.class_tag = tag;
  return g;
}

Geometry Geometry::LineString(std::vector<LatLon> pts, std::optional<int> tag) {
  Geometry g;
  g.kind = GeometryKind::kLineString;
  g.vertices = std::move(pts);
  g.class_tag = tag;
  return g;
}

Geometry Geometry::FromPolygon(Polygon poly, std::optional<int> tag) {
  Geometry g;
  g.kind = GeometryKind::kPolygon;
  g.polygons.push_back(std::move(poly));
  g.class_tag = tag;
  return g;
}

void ValidateGeometry(const Geometry& g) {
  const std::string kind = GeometryKindName(g.kind);
  switch (g.kind) {
    case GeometryKind::kPoint:
      if (g.vertices.size() != 1) throw ValidationError("POINT needs exactly 1 vertex");
      ValidateVertices(g.vertices, kind);
      break;
    case GeometryKind::kLineString:
      if (g.vertices.size() < 2) {
        throw ValidationError("LINESTRING needs at least 2 vertices");
      }
      ValidateVertices(g.vertices, kind);
      break;
    case GeometryKind::kPolygon:
    case GeometryKind::kMultiPolygon:
      if (g.polygons.empty() ||
          (g.kind == GeometryKind::kPolygon && g.polygons.size() != 1)) {
        throw ValidationError(kind + ": wrong polygon count");
      }
      for (const auto& poly : g.polygons) {
        ValidateRing(poly.outer, kind);
        ValidateVertices(poly.outer, kind);
        for (const auto& hole : poly.holes) {
          ValidateRing(hole, kind);
          ValidateVertices(hole, kind);
        }
      }
      break;
  }
  if (g.class_tag && *g.class_tag < 0) {
    throw ValidationError("class tag must be non-negative");
  }
}

Geometry ParseWktGeometry(std::string_view text, std::size_t line) {
  Geometry g = WktParser(text, line).Parse();
  ValidateAt(g, line);
  return g;
}

std::vector<WktRecord> ParseWktRecords(std::string_view text) {
  std::vector<WktRecord> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    WktRecord rec;
    rec.line = line_no;
    std::size_t tab = line.find('\t');
    rec.geometry = ParseWktGeometry(line.substr(0, tab), line_no);
    while (tab != std::string_view::npos) {
      std::size_t next = line.find('\t', tab + 1);
      rec.suffix.push_back(Trim(line.substr(tab + 1, next == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : next - tab - 1)));
      tab = next;
    }
    out.push_back(std::move(rec));
    if (end == text.size()) break;
  }
  return out;
}

std::vector<Geometry> ParseWkt(std::string_view text) {
  std::vector<Geometry> out;
  for (auto& rec : ParseWktRecords(text)) {
    if (!rec.suffix.empty() && !rec.suffix.front().empty()) {
      const std::string& field = rec.suffix.front();
      int tag = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), tag);
      if (ec != std::errc() || ptr != field.data() + field.size() || tag < 0) {
        throw ParseError(rec.line, "class tag '" + field + "' is not a non-negative integer");
      }
      rec.geometry.class_tag = tag;
    }
    out.push_back(std::move(rec.geometry));
  }
  return out;
}

std::string SerializeWkt(const Geometry& g) {
  std::string out = GeometryKindName(g.kind);
  out.push_back(' ');
  switch (g.kind) {
    case GeometryKind::kPoint:
      out.push_back('(');
      out += FormatDouble(g.vertices.at(0).lon);
      out.push_back(' ');
      out += FormatDouble(g.vertices.at(0).lat);
      out.push_back(')');
      break;
    case GeometryKind::kLineString:
      AppendCoords(out, g.vertices);
      break;
    case GeometryKind::kPolygon:
      AppendPolygon(out, g.polygons.at(0));
      break;
    case GeometryKind::kMultiPolygon:
      out.push_back('(');
      for (std::size_t i = 0; i < g.polygons.size(); ++i) {
        if (i) out += ", ";
        AppendPolygon(out, g.polygons[i]);
      }
      out.push_back(')');
      break;
  }
  return out;
}

std::string SerializeWktLine(const Geometry& g) {
  std::string out = SerializeWkt(g);
  if (g.class_tag) out += "\t" + std::to_string(*g.class_tag);
  return out;
}

BBox BoundsOf(const Geometry& g) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BBox b{{inf, inf}, {-inf, -inf}};
  auto grow = [&b](const LatLon& p) {
    b.min.lon = std::min(b.min.lon, p.lon);
    b.min.lat = std::min(b.min.lat, p.lat);
    b.max.lon = std::max(b.max.lon, p.lon);
    b.max.lat = std::max(b.max.lat, p.lat);
  };
  for (const auto& p : g.vertices) grow(p);
  for (const auto& poly : g.polygons) {
    for (const auto& p : poly.outer) grow(p);
  }
  return b;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace trinity::geo
