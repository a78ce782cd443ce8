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
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/geo/wkt.hpp"
#include "trinity/inference/heatmap.hpp"
#include "trinity/service/types.hpp"

namespace trinity::service {

// Mean over pixels and tasks of the normalized entropy H(p) / ln(K), with
// 0 ln 0 = 0. 1 for uniform confidences, 0 for one-hot.
double TileUncertainty(const inference::Heatmap& heatmap);

// Drops excluded tiles and orders the rest by uncertainty descending, ties by
// tile key ascending.
std::vector<RankedTile> RankByUncertainty(std::vector<RankedTile> candidates,
                                          const std::set<geo::TileKey>& exclude);

struct GoldenReport {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  double iou = 1.0;
  std::size_t tiles = 0;
};

void to_json(nlohmann::json& j, const GoldenReport& r);

// Pixelwise comparison over the heatmaps' tiles: a pixel is predicted
// positive when confidence[class_index] >= tau and golden positive when the
// rasterized golden geometries paint it class_index. Ratios with a zero
// denominator are 1; F1 is 0 when precision + recall is 0. A non-empty golden
// set touching none of the tiles throws ValidationError.
GoldenReport EvaluateGolden(const std::vector<inference::Heatmap>& heatmaps, std::size_t task,
                            int class_count, int class_index, double tau,
                            const std::vector<geo::Geometry>& golden);

}  // namespace trinity::service
