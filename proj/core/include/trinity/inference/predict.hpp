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

#include <filesystem>
#include <string>
#include <vector>

#include "trinity/dataprep/dataset.hpp"
#include "trinity/inference/heatmap.hpp"
#include "trinity/kernel/model.hpp"
#include "trinity/store/channel_store.hpp"

namespace trinity::inference {

// Forward plus softmax on the tile's input assembled exactly as for training.
Heatmap PredictTile(const kernel::SegmentationModel<float>& model,
                    const store::ChannelStore& store, const dataprep::DatasetManifest& manifest,
                    const geo::TileKey& tile, const dataprep::DateOverrides& overrides = {});

struct PredictOptions {
  std::size_t workers = 1;
  dataprep::DateOverrides date_overrides;
  bool render_png = true;
};

struct PredictSummary {
  std::vector<geo::TileKey> tiles;  // row-major
};

// Predicts every tile covering `region`, writing <out>/16/<x>/<y>.trhm and,
// when enabled, <out>/viz/<task>/<class>/16/<x>/<y>.png. Tile i goes to
// worker i % workers; output bytes do not depend on the worker count. The
// model and manifest are checked against each other and the store before any
// work. On failure every output written by this call is removed.
PredictSummary PredictRegion(const kernel::SegmentationModel<float>& model,
                             const store::ChannelStore& store,
                             const dataprep::DatasetManifest& manifest, const geo::BBox& region,
                             const std::filesystem::path& out_dir,
                             const PredictOptions& options = {});

std::filesystem::path VizPath(const std::filesystem::path& dir, const std::string& task,
                              int class_index, const geo::TileKey& tile);

// Stores the heatmaps of `tiles` as a new non-temporal profile whose channels
// are the task-major class planes, named "<task>:<class>", mean 0, std 1.
store::ProfileMeta IngestHeatmapsAsProfile(store::ChannelStore& store,
                                           const std::filesystem::path& heatmap_dir,
                                           const std::vector<geo::TileKey>& tiles,
                                           const std::vector<kernel::TaskSpec>& tasks,
                                           const std::string& profile_id,
                                           const std::string& description = "");

}  // namespace trinity::inference
