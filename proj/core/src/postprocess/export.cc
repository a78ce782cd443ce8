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

#include "trinity/postprocess/export.hpp"


#include "trinity/error.hpp"

namespace trinity::postprocess {
using nlohmann::json;

namespace {

json Coordinates(const std::vector<geo::LatLon>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(json::array({p.lon, p.lat}));
  return out;
}

const RoadSegment& FindSegment(const std::vector<RoadSegment>& network, const std::string& id) {
  for (const auto& s : network) {
    if (s.segment_id == id) return s;
  }
  throw NotFoundError("segment '" + id + "' not in the road network");
}

}  // namespace

FilterItem ToFilterItem(const ClusterPolygon& p) {
  return FilterItem{{{"score", p.score}, {"area_px", p.area_px}, {"weight_sum", p.weight_sum}},
                    {}};
}

FilterItem ToFilterItem(const SegmentScore& s) {
  return FilterItem{{{"score", s.score}, {"weight_sum", s.weight_sum}}, s.attributes};
}

std::string PolygonsToWkt(const std::vector<ClusterPolygon>& polygons) {
  std::string out;
  for (const auto& p : polygons) {
    out += geo::SerializeWkt(p.polygon) + "\t" + geo::FormatDouble(p.score) + "\n";
  }
  return out;
}

std::string SegmentsToWkt(const std::vector<SegmentScore>& scores,
                          const std::vector<RoadSegment>& network) {
  std::string out;
  for (const auto& s : scores) {
    const auto& seg = FindSegment(network, s.segment_id);
    out += geo::SerializeWkt(geo::Geometry::LineString(seg.polyline)) + "\t" +
           geo::FormatDouble(s.score) + "\n";
  }
  return out;
}

json PolygonsToGeoJson(const std::vector<ClusterPolygon>& polygons) {
  json features = json::array();
  for (const auto& p : polygons) {
    json rings = json::array({Coordinates(p.polygon.polygons.at(0).outer)});
    features.push_back(json{
        {"type", "Feature"},
        {"geometry", {{"type", "Polygon"}, {"coordinates", rings}}},
        {"properties", {{"cluster_id", p.cluster_id}, {"score", p.score}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}};
}

json SegmentsToGeoJson(const std::vector<SegmentScore>& scores,
                       const std::vector<RoadSegment>& network) {
  json features = json::array();
  for (const auto& s : scores) {
    const auto& seg = FindSegment(network, s.segment_id);
    features.push_back(json{
        {"type", "Feature"},
        {"geometry", {{"type", "LineString"}, {"coordinates", Coordinates(seg.polyline)}}},
        {"properties", {{"segment_id", s.segment_id}, {"score", s.score}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}};
}

}  // namespace trinity::postprocess
