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

// Synthetic data shared by the unit and acceptance tests.

#include <filesystem>
#include <string>
#include <vector>

#include "trinity/geo/projection.hpp"
#include "trinity/geo/wkt.hpp"
#include "trinity/inference/heatmap.hpp"
#include "trinity/kernel/example.hpp"
#include "trinity/labels/label_set.hpp"
#include "trinity/store/channel_store.hpp"
#include "trinity/store/trc_codec.hpp"
#include "trinity/util/rng.hpp"

namespace trinity::testing {

enum class Density { kEmpty, kSingle, kDense, kRandom };

store::SparseTileRecord RandomRecord(util::Lcg64& rng, const geo::TileKey& tile, int channels,
                                     Density density);

// Lon/lat of a continuous position relative to the tile's top-left corner,
// in zoom-24 pixels.
geo::LatLon TileLocalToLonLat(const geo::TileKey& tile, double lx, double ly);

// A point, linestring, polygon (sometimes with a hole) or multipolygon with
// vertices around the tile. Point and line vertices sit well inside their
// pixels so that pixel membership does not hinge on the last bit.
geo::Geometry RandomGeometry(util::Lcg64& rng, const geo::TileKey& tile, int class_count);

// Images with `channels` smooth random fields and the label (channel0 > 0).
std::vector<kernel::Example> ThresholdExamples(int count, int channels, int size,
                                               std::uint64_t seed);

inference::Heatmap RandomHeatmap(util::Lcg64& rng, const geo::TileKey& tile,
                                 const std::vector<int>& class_counts);
inference::Heatmap UniformHeatmap(const geo::TileKey& tile, int class_count);
inference::Heatmap OneHotHeatmap(const geo::TileKey& tile, int class_count);

// A block of tiles containing disc-shaped targets. Channel 0 of the
// profile is a clamped signed distance to the nearest disc edge, channels 1
// and 2 are noise.
struct DiscScene {
  struct Disc {
    double cx = 0.0;  // zoom-24 pixels, relative to the block's top-left
    double cy = 0.0;
    double r = 0.0;
  };
  geo::TileKey origin{10496, 25344};
  int cols = 4;
  int rows = 3;
  std::vector<Disc> discs{{300.0, 330.0, 170.0}, {760.0, 420.0, 120.0}};

  std::vector<geo::TileKey> Tiles() const;  // row-major
  // Inset by a pixel so the box covers exactly Tiles().
  geo::BBox Region() const;
  store::ProfileMeta Profile(const std::string& profile_id) const;
  std::vector<store::SparseTileRecord> Records(std::uint64_t seed) const;
  // One 96-gon per disc, tag 1.
  std::string Wkt() const;
};

// profile.json plus 16/<x>/<y>.trc, the layout read by `trinity profile ingest`.
void WriteProfileDir(const std::filesystem::path& dir, const store::ProfileMeta& meta,
                     const std::vector<store::SparseTileRecord>& records);

// Registers the scene's profile and uploads its discs as a one-task label set
// ("target", 2 classes) labeled over the whole block.
void LoadDiscScene(const DiscScene& scene, store::ChannelStore& store,
                   labels::LabelManager& labels, const std::string& profile_id,
                   const std::string& label_set_id, std::uint64_t seed = 1);

}  // namespace trinity::testing
