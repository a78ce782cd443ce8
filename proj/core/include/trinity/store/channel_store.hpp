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

#include <array>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/store/channel_plane.hpp"
#include "trinity/store/trc_codec.hpp"

namespace trinity::store {

struct ChannelStats {
  double mean = 0.0;
  double std = 1.0;

  friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

// Catalog entry for a profile: an ordered group of channels.
struct ProfileMeta {
  std::string profile_id;
  std::string name;
  std::string description;
  std::vector<std::string> channel_names;
  int channel_count = 0;
  bool temporal = false;
  std::vector<std::string> dates;  // ISO-8601 YYYY-MM-DD, strictly increasing
  std::vector<ChannelStats> normalization;

  friend bool operator==(const ProfileMeta&, const ProfileMeta&) = default;
};

void to_json(nlohmann::json& j, const ChannelStats& s);
void from_json(const nlohmann::json& j, ChannelStats& s);
void to_json(nlohmann::json& j, const ProfileMeta& m);
void from_json(const nlohmann::json& j, ProfileMeta& m);

void ValidateProfileMeta(const ProfileMeta& meta);
bool IsIsoDate(const std::string& s);

// File-backed profile store rooted at a directory:
//   <root>/catalog.json
//   <root>/<profile_id>/[<date>/]16/<x>/<y>.trc
//
// The catalog is re-read on every metadata call and rewritten under an
// exclusive file lock, so offline ingestion and a running service observe
// each other's registrations. Tile writes are atomic renames.
class ChannelStore {
 public:
  explicit ChannelStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::string RegisterProfile(const ProfileMeta& meta);
  std::vector<ProfileMeta> ListProfiles() const;
  ProfileMeta GetProfile(const std::string& profile_id) const;
  bool HasProfile(const std::string& profile_id) const;

  void PutTile(const std::string& profile_id, const std::optional<std::string>& date,
               const SparseTileRecord& record);

  // Absent tiles decode to channel_count all-zero planes.
  std::vector<ChannelPlane> GetTile(const std::string& profile_id,
                                    const geo::TileKey& tile,
                                    const std::optional<std::string>& date = {}) const;

  // Element-wise sum over stored dates in [date_from, date_to], accumulated
  // in double over ascending dates and emitted as float.
  std::vector<ChannelPlane> AggregateRange(const std::string& profile_id,
                                           const geo::TileKey& tile,
                                           const std::string& date_from,
                                           const std::string& date_to) const;

  std::filesystem::path TilePath(const std::string& profile_id,
                                 const std::optional<std::string>& date,
                                 const geo::TileKey& tile) const;

 private:
  std::vector<ProfileMeta> LoadCatalog() const;
  void CheckDate(const ProfileMeta& meta, const std::optional<std::string>& date) const;
  std::vector<ChannelPlane> ReadPlanes(const ProfileMeta& meta,
                                       const std::optional<std::string>& date,
                                       const geo::TileKey& tile) const;

  std::filesystem::path root_;
  mutable std::array<std::mutex, 64> key_mutexes_;
};

}  // namespace trinity::store
