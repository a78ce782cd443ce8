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

#include "trinity/inference/predict.hpp"

#include "trinity/error.hpp"
#include "trinity/inference/render.hpp"
#include "trinity/kernel/loss.hpp"
#include "trinity/util/fs.hpp"
#include "trinity/util/parallel.hpp"

namespace trinity::inference {
namespace fs = std::filesystem;

namespace {

void CheckCompatible(const kernel::SegmentationModel<float>& model,
                     const store::ChannelStore& store,
                     const dataprep::DatasetManifest& manifest) {
  const auto& spec = model.spec();
  if (spec.in_channels != manifest.channel_count) {
    throw ValidationError("model expects " + std::to_string(spec.in_channels) +
                          " input channels; channel manifest has " +
                          std::to_string(manifest.channel_count));
  }
  if (spec.tasks != manifest.tasks) {
    throw ValidationError("model tasks do not match the dataset manifest");
  }
  for (const auto& src : manifest.profiles) {
    if (!store.HasProfile(src.profile_id)) {
      throw ValidationError("manifest profile '" + src.profile_id + "' is not in the catalog");
    }
    const auto meta = store.GetProfile(src.profile_id);
    if (meta.channel_count != src.channel_count || meta.temporal != src.date_range.has_value()) {
      throw ValidationError("profile '" + src.profile_id +
                            "' no longer matches the channel manifest");
    }
  }
}

void RemoveOutputs(const fs::path& out_dir, const std::vector<geo::TileKey>& tiles,
                   const std::vector<kernel::TaskSpec>& tasks) {
  std::error_code ec;
  for (const auto& t : tiles) {
    fs::remove(HeatmapPath(out_dir, t), ec);
    for (const auto& task : tasks) {
      for (int c = 0; c < task.class_count; ++c) fs::remove(VizPath(out_dir, task.name, c, t), ec);
    }
  }
}

}  // namespace

fs::path VizPath(const fs::path& dir, const std::string& task, int class_index,
                 const geo::TileKey& tile) {
  return dir / "viz" / task / std::to_string(class_index) / std::to_string(geo::kTileZoom) /
         std::to_string(tile.x) / (std::to_string(tile.y) + ".png");
}

Heatmap PredictTile(const kernel::SegmentationModel<float>& model,
                    const store::ChannelStore& store, const dataprep::DatasetManifest& manifest,
                    const geo::TileKey& tile, const dataprep::DateOverrides& overrides) {
  const auto image = dataprep::AssembleInput(store, manifest, tile, overrides);
  Heatmap hm;
  hm.tile = tile;
  for (const auto& logits : model.Forward(image)) hm.tasks.push_back(kernel::Softmax(logits));
  return hm;
}

PredictSummary PredictRegion(const kernel::SegmentationModel<float>& model,
                             const store::ChannelStore& store,
                             const dataprep::DatasetManifest& manifest, const geo::BBox& region,
                             const fs::path& out_dir, const PredictOptions& options) {
  if (options.workers < 1) throw ValidationError("workers must be >= 1");
  CheckCompatible(model, store, manifest);
  PredictSummary summary;
  summary.tiles = geo::TilesCovering(region);
  const auto& tasks = model.spec().tasks;
  try {
    util::ParallelFor(summary.tiles.size(), options.workers, [&](std::size_t i) {
      const auto& tile = summary.tiles[i];
      const Heatmap hm = PredictTile(model, store, manifest, tile, options.date_overrides);
      util::AtomicWriteFile(HeatmapPath(out_dir, tile), EncodeHeatmap(hm));
      if (options.render_png) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
          for (int c = 0; c < tasks[t].class_count; ++c) {
            util::AtomicWriteFile(VizPath(out_dir, tasks[t].name, c, tile),
                                  RenderHeatmapPng(hm, t, c));
          }
        }
      }
    });
    for (const auto& tile : summary.tiles) {
      if (!fs::exists(HeatmapPath(out_dir, tile))) {
        throw Error(ErrorCode::kInternal, "heatmap for tile " + tile.ToString() + " missing");
      }
    }
  } catch (...) {
    RemoveOutputs(out_dir, summary.tiles, tasks);
    throw;
  }
  return summary;
}

store::ProfileMeta IngestHeatmapsAsProfile(store::ChannelStore& store,
                                           const fs::path& heatmap_dir,
                                           const std::vector<geo::TileKey>& tiles,
                                           const std::vector<kernel::TaskSpec>& tasks,
                                           const std::string& profile_id,
                                           const std::string& description) {
  store::ProfileMeta meta;
  meta.profile_id = profile_id;
  meta.name = profile_id;
  meta.description = description;
  for (const auto& t : tasks) {
    for (int c = 0; c < t.class_count; ++c) {
      meta.channel_names.push_back(t.name + ":" + std::to_string(c));
    }
  }
  meta.channel_count = static_cast<int>(meta.channel_names.size());
  meta.normalization.assign(meta.channel_names.size(), store::ChannelStats{});
  std::vector<store::SparseTileRecord> records;
  for (const auto& tile : tiles) {
    const Heatmap hm = LoadHeatmap(HeatmapPath(heatmap_dir, tile));
    if (hm.tasks.size() != tasks.size()) throw ValidationError("heatmap task count mismatch");
    store::SparseTileRecord rec;
    rec.tile = tile;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (hm.tasks[t].channels != tasks[t].class_count) {
        throw ValidationError("heatmap class count mismatch for task '" + tasks[t].name + "'");
      }
      for (int c = 0; c < hm.tasks[t].channels; ++c) {
        store::ChannelPlane plane;
        const auto src = hm.tasks[t].plane(c);
        std::copy(src.begin(), src.end(), plane.values().begin());
        rec.channels.push_back(store::Sparsify(plane));
      }
    }
    records.push_back(std::move(rec));
  }
  store.RegisterProfile(meta);
  for (const auto& rec : records) store.PutTile(profile_id, std::nullopt, rec);
  return meta;
}

}  // namespace trinity::inference
