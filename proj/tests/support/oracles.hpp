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

// Brute-force reference computations. Each one is written from the defining
// formula, shares no code with the library routine it checks, and favours
// obviousness over speed.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trinity/geo/wkt.hpp"
#include "trinity/inference/heatmap.hpp"
#include "trinity/kernel/model.hpp"
#include "trinity/labels/rasterize.hpp"
#include "trinity/postprocess/cluster.hpp"
#include "trinity/postprocess/map_match.hpp"

namespace trinity::testing {

struct GridPos {
  double x = 0.0;
  double y = 0.0;
};

// Continuous Web Mercator grid position at `zoom`.
GridPos MercatorGrid(double lon, double lat, int zoom);

// Pixel-by-pixel rasterization: polygon pixels by the even-odd crossing test
// at the pixel centre, line pixels by the half-up rounding inequality along
// the major axis, points by containment. Later geometries overwrite.
labels::LabelPlane RasterizeOracle(const std::vector<geo::Geometry>& geometries,
                                   const geo::TileKey& tile);

// O(n^2) weighted DBSCAN: all-pairs neighbourhoods, seeds in input order,
// border points kept by the first cluster that reaches them.
postprocess::ClusterResult NaiveWeightedDbscan(const std::vector<postprocess::WeightedPixel>& pts,
                                               double eps, double min_weight);

// Textbook DBSCAN on unweighted points with a count threshold (self included).
postprocess::ClusterResult ClassicDbscan(const std::vector<std::pair<double, double>>& pts,
                                         double eps, int min_pts);

struct NaiveSegmentScore {
  double weight_sum = 0.0;
  double length_px = 0.0;
  double score = 0.0;
};

// All-pairs nearest segment per pixel centre; every segment appears in the
// result, including those that received nothing.
std::map<std::string, NaiveSegmentScore> NaiveMapMatch(
    const std::vector<postprocess::WeightedPixel>& pts,
    const std::vector<postprocess::RoadSegment>& network, double radius_m);

// Mean over tasks of the mean over pixels of -sum p ln p / ln K.
double NaiveTileUncertainty(const inference::Heatmap& heatmap);

struct OracleMetrics {
  double accuracy = 0.0;
  std::vector<double> iou;
  double fiou = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t n = 0;
};

// Per-pixel confusion counting over pixels whose truth is not IGNORE.
OracleMetrics BruteForceMetrics(const std::vector<std::uint8_t>& truth,
                                const std::vector<std::uint8_t>& predicted, int class_count);

// Direct nested-loop 3x3 zero-padded convolution.
kernel::Tensor<double> NaiveConv3x3(const kernel::Tensor<double>& in,
                                    const kernel::ParamTensor<double>& w,
                                    const kernel::ParamTensor<double>& b);

// The encoder-decoder graph rebuilt from nested loops.
std::vector<kernel::Tensor<double>> NaiveForward(const kernel::ModelSpec& spec,
                                                 const kernel::Parameters<double>& params,
                                                 const kernel::Tensor<double>& image);

}  // namespace trinity::testing
