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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "trinity/geo/projection.hpp"
#include "trinity/postprocess/cluster.hpp"

namespace trinity::postprocess {

struct RoadSegment {
  std::string segment_id;
  std::vector<geo::LatLon> polyline;
  std::map<std::string, std::string> attributes;
};

// One segment per line: "LINESTRING (...)\t<segment_id>[\tk=v;k=v...]". Segment
// ids must be unique.
std::vector<RoadSegment> ParseRoadNetwork(std::string_view text);

struct SegmentScore {
  std::string segment_id;
  double score = 0.0;        // assigned weight / polyline length in pixels
  double weight_sum = 0.0;
  std::size_t point_count = 0;
  double length_px = 0.0;
  std::map<std::string, std::string> attributes;
};

// Each pixel centre goes to the nearest segment within radius_m, measured in
// zoom-24 pixels times the ground resolution at the pixel's latitude; ties go
// to the smallest segment id. Returns segments scoring >= score_tau, by score
// descending then id.
std::vector<SegmentScore> MapMatch(const std::vector<WeightedPixel>& points,
                                   const std::vector<RoadSegment>& network, double radius_m,
                                   double score_tau);

// Distance in zoom-24 pixels from (px, py) to the polyline given in zoom-24
// grid coordinates.
double PointToPolylinePx(double px, double py, const std::vector<geo::WorldPoint>& line);

}  // namespace trinity::postprocess
