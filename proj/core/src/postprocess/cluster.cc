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

#include "trinity/postprocess/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "trinity/error.hpp"

namespace trinity::postprocess {
namespace {

struct CellHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& c) const {
    return std::hash<std::int64_t>()(c.first * 0x9E3779B97F4A7C15LL ^ c.second);
  }
};

class GridIndex {
 public:
  GridIndex(const std::vector<WeightedPixel>& points, double eps)
      : points_(points), eps_(eps), eps2_(eps * eps) {
    for (std::size_t i = 0; i < points.size(); ++i) cells_[Cell(points[i])].push_back(i);
  }

  std::vector<std::size_t> Neighbours(std::size_t i) const {
    std::vector<std::size_t> out;
    const auto [cx, cy] = Cell(points_[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find({cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (std::size_t j : it->second) {
          const double ex = static_cast<double>(points_[j].x) - points_[i].x;
          const double ey = static_cast<double>(points_[j].y) - points_[i].y;
          if (ex * ex + ey * ey <= eps2_) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::pair<std::int64_t, std::int64_t> Cell(const WeightedPixel& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / eps_)),
            static_cast<std::int64_t>(std::floor(p.y / eps_))};
  }

  const std::vector<WeightedPixel>& points_;
  double eps_;
  double eps2_;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, CellHash>
      cells_;
};

double WeightOf(const std::vector<WeightedPixel>& points, const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (std::size_t j : idx) s += points[j].weight;
  return s;
}

std::int64_t Cross(const std::pair<std::int64_t, std::int64_t>& o,
                   const std::pair<std::int64_t, std::int64_t>& a,
                   const std::pair<std::int64_t, std::int64_t>& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

}  // namespace

std::vector<WeightedPixel> ThresholdFilter(const std::vector<inference::Heatmap>& heatmaps,
                                           std::size_t task, int class_index, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("tau must be in (0, 1]");
  std::vector<WeightedPixel> out;
  for (const auto& hm : heatmaps) {
    if (task >= hm.tasks.size()) throw ValidationError("task index out of range");
    const auto& t = hm.tasks[task];
    if (class_index < 0 || class_index >= t.channels) {
      throw ValidationError("class index out of range");
    }
    const auto plane = t.plane(class_index);
    for (std::uint32_t i = 0; i < plane.size(); ++i) {
      if (plane[i] >= tau) {
        const auto px = geo::TileLocalToPixel(hm.tile, i);
        out.push_back({px.x, px.y, plane[i]});
      }
    }
  }
  return out;
}

ClusterResult WeightedDbscan(const std::vector<WeightedPixel>& points, double eps,
                             double min_weight) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be positive");
  if (!(min_weight > 0.0)) throw ValidationError("min_weight must be positive");
  for (const auto& p : points) {
    if (!std::isfinite(p.weight)) throw ValidationError("point weights must be finite");
  }
  constexpr std::ptrdiff_t kUnvisited = -2, kNoise = -1;
  std::vector<std::ptrdiff_t> label(points.size(), kUnvisited);
  const GridIndex index(points, eps);
  ClusterResult result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] != kUnvisited) continue;
    const auto seeds = index.Neighbours(i);
    if (WeightOf(points, seeds) < min_weight) {
      label[i] = kNoise;
      continue;
    }
    const auto c = static_cast<std::ptrdiff_t>(result.clusters.size());
    result.clusters.emplace_back();
    label[i] = c;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (label[q] == kNoise) label[q] = c;
      if (label[q] != kUnvisited) continue;
      label[q] = c;
      const auto nq = index.Neighbours(q);
      if (WeightOf(points, nq) >= min_weight) queue.insert(queue.end(), nq.begin(), nq.end());
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] == kNoise) result.noise.push_back(i);
    else result.clusters[static_cast<std::size_t>(label[i])].push_back(i);
  }
  return result;
}

std::vector<std::pair<std::int64_t, std::int64_t>> PixelHull(
    const std::vector<WeightedPixel>& points, const std::vector<std::size_t>& members) {
  // Work in (x, -y) so counterclockwise means counterclockwise with north up.
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  pts.reserve(members.size() * 4);
  for (std::size_t m : members) {
    const std::int64_t x = points.at(m).x, y = points.at(m).y;
    for (std::int64_t dx = 0; dx <= 1; ++dx) {
      for (std::int64_t dy = 0; dy <= 1; ++dy) pts.push_back({x + dx, -(y + dy)});
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<std::pair<std::int64_t, std::int64_t>> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  for (auto& p : hull) p.second = -p.second;
  return hull;
}

std::vector<ClusterPolygon> ClustersToPolygons(const ClusterResult& result,
                                               const std::vector<WeightedPixel>& points) {
  std::vector<ClusterPolygon> out;
  for (std::size_t c = 0; c < result.clusters.size(); ++c) {
    const auto& members = result.clusters[c];
    if (members.empty()) throw ValidationError("cluster " + std::to_string(c) + " is empty");
    const auto hull = PixelHull(points, members);
    ClusterPolygon cp;
    cp.cluster_id = c;
    cp.pixel_count = members.size();
    cp.weight_sum = 0.0;
    for (std::size_t m : members) cp.weight_sum += points[m].weight;
    cp.score = cp.weight_sum / static_cast<double>(members.size());
    std::int64_t twice_area = 0;
    geo::Ring ring;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& a = hull[i];
      const auto& b = hull[(i + 1) % hull.size()];
      // Pixel rows grow southward, so flip y for a north-up signed area.
      twice_area += a.first * (-b.second) - b.first * (-a.second);
      ring.push_back(geo::GridToLonLat(static_cast<double>(a.first),
                                       static_cast<double>(a.second), geo::kPixelZoom));
    }
    ring.push_back(ring.front());
    cp.area_px = static_cast<double>(twice_area) / 2.0;
    cp.polygon = geo::Geometry::FromPolygon(geo::Polygon{ring, {}});
    out.push_back(std::move(cp));
  }
  return out;
}

}  // namespace trinity::postprocess
