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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/postprocess/cluster.hpp"
#include "trinity/postprocess/map_match.hpp"
#include "trinity/postprocess/predicate.hpp"

namespace trinity::postprocess {

FilterItem ToFilterItem(const ClusterPolygon& p);
FilterItem ToFilterItem(const SegmentScore& s);

// One "<wkt>\t<score>" line per polygon.
std::string PolygonsToWkt(const std::vector<ClusterPolygon>& polygons);
// One "<linestring wkt>\t<score>" line per segment; `network` supplies geometry.
std::string SegmentsToWkt(const std::vector<SegmentScore>& scores,
                          const std::vector<RoadSegment>& network);

nlohmann::json PolygonsToGeoJson(const std::vector<ClusterPolygon>& polygons);
nlohmann::json SegmentsToGeoJson(const std::vector<SegmentScore>& scores,
                                 const std::vector<RoadSegment>& network);

}  // namespace trinity::postprocess
