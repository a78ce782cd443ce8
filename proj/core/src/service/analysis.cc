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

#include "trinity/service/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "trinity/error.hpp"
#include "trinity/labels/rasterize.hpp"

namespace trinity::service {

double TileUncertainty(const inference::Heatmap& heatmap) {
  if (heatmap.tasks.empty()) throw ValidationError("heatmap has no tasks");
  double total = 0.0;
  for (const auto& t : heatmap.tasks) {
    const std::size_t n = t.plane_size();
    const double norm = std::log(static_cast<double>(t.channels));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double h = 0.0;
      for (int c = 0; c < t.channels; ++c) {
        const double p = t.data[c * n + i];
        if (p > 0.0) h -= p * std::log(p);
      }
      sum += h / norm;
    }
    total += sum / static_cast<double>(n);
  }
  return total / static_cast<double>(heatmap.tasks.size());
}

std::vector<RankedTile> RankByUncertainty(std::vector<RankedTile> candidates,
                                          const std::set<geo::TileKey>& exclude) {
  std::erase_if(candidates, [&](const RankedTile& r) { return exclude.count(r.tile) > 0; });
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.uncertainty != b.uncertainty) return a.uncertainty > b.uncertainty;
    return a.tile < b.tile;
  });
  return candidates;
}

void to_json(nlohmann::json& j, const GoldenReport& r) {
  j = nlohmann::json{{"tp", r.tp},         {"fp", r.fp},      {"fn", r.fn},
                     {"tn", r.tn},         {"precision", r.precision},
                     {"recall", r.recall}, {"f1", r.f1},      {"iou", r.iou},
                     {"tiles", r.tiles}};
}

GoldenReport EvaluateGolden(const std::vector<inference::Heatmap>& heatmaps, std::size_t task,
                            int class_count, int class_index, double tau,
                            const std::vector<geo::Geometry>& golden) {
  if (class_index < 0 || class_index >= class_count) {
    throw ValidationError("class index out of range");
  }
  if (!golden.empty()) {
    const bool overlap = std::any_of(heatmaps.begin(), heatmaps.end(), [&](const auto& hm) {
      return std::any_of(golden.begin(), golden.end(),
                         [&](const auto& g) { return labels::TouchesTile(g, hm.tile); });
    });
    if (!overlap) throw ValidationError("golden geometries overlap none of the predicted tiles");
  }
  GoldenReport r;
  r.tiles = heatmaps.size();
  for (const auto& hm : heatmaps) {
    if (task >= hm.tasks.size() || hm.tasks[task].channels != class_count) {
      throw ValidationError("heatmap does not match the task");
    }
    const auto truth = labels::Rasterize(golden, hm.tile, class_count);
    const auto conf = hm.tasks[task].plane(class_index);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool g = truth[i] == class_index;
      const bool p = conf[i] >= tau;
      if (g && p) ++r.tp;
      else if (p) ++r.fp;
      else if (g) ++r.fn;
      else ++r.tn;
    }
  }
  const auto ratio = [](std::uint64_t a, std::uint64_t b) {
    return b == 0 ? 1.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  r.iou = ratio(r.tp, r.tp + r.fp + r.fn);
  return r;
}

}  // namespace trinity::service
