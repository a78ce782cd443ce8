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
#include <vector>

#include "trinity/geo/wkt.hpp"
#include "trinity/inference/heatmap.hpp"

namespace trinity::postprocess {

// A zoom-24 pixel and its confidence.
struct WeightedPixel {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedPixel&, const WeightedPixel&) = default;
};

// Pixels with confidence >= tau, heatmaps in the given order and pixels
// row-major within each tile.
std::vector<WeightedPixel> ThresholdFilter(const std::vector<inference::Heatmap>& heatmaps,
                                           std::size_t task, int class_index, double tau);

struct ClusterResult {
  std::vector<std::vector<std::size_t>> clusters;  // member indices, ascending
  std::vector<std::size_t> noise;                  // ascending

  friend bool operator==(const ClusterResult&, const ClusterResult&) = default;
};

// DBSCAN over Euclidean pixel distance where p is core iff the summed weight
// of its eps-neighbourhood (p included) reaches min_weight. Points are
// visited in input order and clusters grow breadth-first over index-sorted
// neighbour lists; a border point stays with the first cluster reaching it.
// Neighbours come from a grid hash with eps-sized cells.
ClusterResult WeightedDbscan(const std::vector<WeightedPixel>& points, double eps,
                             double min_weight);

struct ClusterPolygon {
  std::size_t cluster_id = 0;
  geo::Geometry polygon;
  double score = 0.0;       // mean member weight
  double weight_sum = 0.0;
  double area_px = 0.0;     // hull area in square zoom-24 pixels
  std::size_t pixel_count = 0;
};

// Convex hull (monotone chain) of the corners of every member pixel, as a
// closed counterclockwise lon/lat ring.
std::vector<ClusterPolygon> ClustersToPolygons(const ClusterResult& result,
                                               const std::vector<WeightedPixel>& points);

// Hull vertices in zoom-24 pixel-corner coordinates, counterclockwise with
// north up, not closed.
std::vector<std::pair<std::int64_t, std::int64_t>> PixelHull(
    const std::vector<WeightedPixel>& points, const std::vector<std::size_t>& members);

}  // namespace trinity::postprocess
