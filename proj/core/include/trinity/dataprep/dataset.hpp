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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/geo/projection.hpp"
#include "trinity/kernel/example.hpp"
#include "trinity/labels/label_set.hpp"
#include "trinity/store/channel_store.hpp"

namespace trinity::dataprep {

inline constexpr double kDefaultValFraction = 0.30;

struct DateRange {
  std::string from;
  std::string to;

  friend bool operator==(const DateRange&, const DateRange&) = default;
};

struct DatasetSpec {
  std::vector<std::string> profile_ids;
  std::map<std::string, DateRange> date_ranges;  // temporal profiles only
  std::string label_set_id;
  std::optional<std::filesystem::path> transient_dir;
  double val_fraction = kDefaultValFraction;
  std::uint64_t split_seed = 0;

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

void to_json(nlohmann::json& j, const DateRange& r);
void from_json(const nlohmann::json& j, DateRange& r);
void to_json(nlohmann::json& j, const DatasetSpec& s);
void from_json(const nlohmann::json& j, DatasetSpec& s);

// Everything needed to rebuild a model input for any tile: channel sources in
// stacking order and per-channel normalization.
struct ProfileSource {
  std::string profile_id;
  int channel_count = 0;
  std::optional<DateRange> date_range;  // set for temporal profiles

  friend bool operator==(const ProfileSource&, const ProfileSource&) = default;
};

struct TransientSource {
  std::filesystem::path dir;
  int channel_count = 0;
  std::vector<std::string> channel_names;

  friend bool operator==(const TransientSource&, const TransientSource&) = default;
};

struct DatasetManifest {
  int channel_count = 0;  // C
  std::vector<std::string> channel_names;
  std::vector<ProfileSource> profiles;
  std::optional<TransientSource> transient;
  std::vector<store::ChannelStats> normalization;  // one per channel
  std::string label_set_id;
  std::vector<labels::TaskSpec> tasks;
  std::vector<geo::TileKey> train_tiles;
  std::vector<geo::TileKey> val_tiles;
  DatasetSpec spec;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

void to_json(nlohmann::json& j, const DatasetManifest& m);
void from_json(const nlohmann::json& j, DatasetManifest& m);

struct Dataset {
  DatasetManifest manifest;
  std::vector<kernel::Example> train;
  std::vector<kernel::Example> val;
};

// out[i] = (in[i] - mean) / std, evaluated in double and rounded to float.
store::ChannelPlane Normalize(const store::ChannelPlane& plane, double mean, double std);

// Val size is round(n * val_fraction), raised to 1 and capped at n - 1 when
// n >= 2. The sorted tiles are shuffled with Lcg64(seed) Fisher-Yates and the
// first val-size tiles become validation. Both outputs are sorted.
std::pair<std::vector<geo::TileKey>, std::vector<geo::TileKey>> SplitTrainVal(
    std::vector<geo::TileKey> tiles, double val_fraction, std::uint64_t seed);

// Per-tile overrides of the temporal windows, keyed by profile id.
using DateOverrides = std::map<std::string, DateRange>;

// Normalized C x 256 x 256 input for one tile, stacked in manifest order.
// Missing stored or transient data reads as zeros before normalization.
kernel::Tensor<float> AssembleInput(const store::ChannelStore& store,
                                    const DatasetManifest& manifest, const geo::TileKey& tile,
                                    const DateOverrides& overrides = {});

// One example per labeled tile of the label set, split into train and val.
// Profiles stack in the order given; temporal profiles are summed over their
// date range (the whole stored range when none is given).
Dataset BuildDataset(const store::ChannelStore& store, const labels::LabelManager& labels,
                     const DatasetSpec& spec, std::size_t threads = 1);

// Appends the channels stored as <dir>/16/<x>/<y>.trc to every example. An
// optional <dir>/transient.json ({channel_names, normalization}) supplies
// names and statistics; otherwise channels are named transient_<i> with mean
// 0 and std 1.
void InjectTransient(Dataset& dataset, const std::filesystem::path& dir);

// Flat example file: C planes of f32 LE, then one u8 plane per task.
std::vector<std::uint8_t> EncodeExample(const kernel::Example& ex);
kernel::Example DecodeExample(std::span<const std::uint8_t> bytes, const geo::TileKey& tile,
                              int channel_count, std::size_t task_count);

// <dir>/manifest.json and <dir>/examples/16/<x>/<y>.bin
void SaveDataset(const std::filesystem::path& dir, const Dataset& dataset);
Dataset LoadDataset(const std::filesystem::path& dir);
DatasetManifest LoadManifest(const std::filesystem::path& dir);

}  // namespace trinity::dataprep
