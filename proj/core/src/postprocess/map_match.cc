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

#include "trinity/postprocess/map_match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "trinity/error.hpp"
#include "trinity/geo/wkt.hpp"

namespace trinity::postprocess {

std::vector<RoadSegment> ParseRoadNetwork(std::string_view text) {
  std::vector<RoadSegment> out;
  std::set<std::string> ids;
  for (auto& rec : geo::ParseWktRecords(text)) {
    if (rec.geometry.kind != geo::GeometryKind::kLineString) {
      throw ParseError(rec.line, "road network entries must be LINESTRING");
    }
    if (rec.suffix.empty() || rec.suffix[0].empty()) {
      throw ParseError(rec.line, "missing segment id");
    }
    if (!ids.insert(rec.suffix[0]).second) {
      throw ParseError(rec.line, "duplicate segment id '" + rec.suffix[0] + "'");
    }
    RoadSegment seg{rec.suffix[0], std::move(rec.geometry.vertices), {}};
    if (rec.suffix.size() > 1) {
      std::string_view attrs = rec.suffix[1];
      while (!attrs.empty()) {
        const auto end = attrs.find(';');
        const std::string_view kv = attrs.substr(0, end);
        if (!kv.empty()) {
          const auto eq = kv.find('=');
          if (eq == std::string_view::npos || eq == 0) {
            throw ParseError(rec.line, "attribute '" + std::string(kv) + "' is not key=value");
          }
          seg.attributes[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
        }
        if (end == std::string_view::npos) break;
        attrs.remove_prefix(end + 1);
      }
    }
    out.push_back(std::move(seg));
  }
  return out;
}

double PointToPolylinePx(double px, double py, const std::vector<geo::WorldPoint>& line) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double ax = line[i].x, ay = line[i].y;
    const double dx = line[i + 1].x - ax, dy = line[i + 1].y - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(px - (ax + t * dx), py - (ay + t * dy)));
  }
  return best;
}

std::vector<SegmentScore> MapMatch(const std::vector<WeightedPixel>& points,
                                   const std::vector<RoadSegment>& network, double radius_m,
                                   double score_tau) {
  if (network.empty()) throw ValidationError("road network is empty");
  if (!(radius_m > 0.0)) throw ValidationError("radius_m must be positive");
  std::vector<std::vector<geo::WorldPoint>> lines;
  std::vector<SegmentScore> scores;
  for (const auto& seg : network) {
    if (seg.polyline.size() < 2) {
      throw ValidationError("segment '" + seg.segment_id + "' needs at least 2 vertices");
    }
    std::vector<geo::WorldPoint> line;
    double length = 0.0;
    for (const auto& v : seg.polyline) {
      line.push_back(geo::LonLatToGrid(v, geo::kPixelZoom));
      if (line.size() > 1) {
        const auto& a = line[line.size() - 2];
        length += std::hypot(line.back().x - a.x, line.back().y - a.y);
      }
    }
    if (!(length > 0.0)) throw ValidationError("segment '" + seg.segment_id + "' has zero length");
    lines.push_back(std::move(line));
    scores.push_back(SegmentScore{seg.segment_id, 0.0, 0.0, 0, length, seg.attributes});
  }
  for (const auto& p : points) {
    const double cx = p.x + 0.5, cy = p.y + 0.5;
    const double lat = geo::GridToLonLat(cx, cy, geo::kPixelZoom).lat;
    const double radius_px = radius_m / geo::GroundResolution(lat, geo::kPixelZoom);
    std::ptrdiff_t best = -1;
    double best_d = 0.0;
    for (std::size_t s = 0; s < lines.size(); ++s) {
      const double d = PointToPolylinePx(cx, cy, lines[s]);
      if (d > radius_px) continue;
      if (best < 0 || d < best_d ||
          (d == best_d && network[s].segment_id < network[best].segment_id)) {
        best = static_cast<std::ptrdiff_t>(s);
        best_d = d;
      }
    }
    if (best >= 0) {
      scores[best].weight_sum += p.weight;
      ++scores[best].point_count;
    }
  }
  std::vector<SegmentScore> out;
  for (auto& s : scores) {
    s.score = s.weight_sum / s.length_px;
    if (s.score >= score_tau) out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.segment_id < b.segment_id;
  });
  return out;
}

}  // namespace trinity::postprocess
