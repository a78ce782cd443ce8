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

#include "trinity/store/channel_store.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <regex>
#include <set>

#include "trinity/error.hpp"
#include "trinity/util/fs.hpp"

namespace trinity::store {
namespace fs = std::filesystem;
using nlohmann::json;

void to_json(json& j, const ChannelStats& s) { j = json{{"mean", s.mean}, {"std", s.std}}; }

void from_json(const json& j, ChannelStats& s) {
  j.at("mean").get_to(s.mean);
  j.at("std").get_to(s.std);
}

void to_json(json& j, const ProfileMeta& m) {
  j = json{{"profile_id", m.profile_id},       {"name", m.name},
           {"description", m.description},     {"channel_names", m.channel_names},
           {"channel_count", m.channel_count}, {"temporal", m.temporal},
           {"dates", m.dates},                 {"normalization", m.normalization}};
}

void from_json(const json& j, ProfileMeta& m) {
  j.at("profile_id").get_to(m.profile_id);
  m.name = j.value("name", m.profile_id);
  m.description = j.value("description", "");
  j.at("channel_names").get_to(m.channel_names);
  m.channel_count = j.value("channel_count", static_cast<int>(m.channel_names.size()));
  m.temporal = j.value("temporal", false);
  m.dates = j.value("dates", std::vector<std::string>{});
  if (j.contains("normalization")) {
    j.at("normalization").get_to(m.normalization);
  } else {
    m.normalization.assign(m.channel_names.size(), ChannelStats{});
  }
}

bool IsIsoDate(const std::string& s) {
  static const std::regex re(R"(\d{4}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01]))");
  return std::regex_match(s, re);
}

void ValidateProfileMeta(const ProfileMeta& meta) {
  static const std::regex id_re("[a-z0-9_-]+");
  if (!std::regex_match(meta.profile_id, id_re)) {
    throw ValidationError("profile_id '" + meta.profile_id + "' must match [a-z0-9_-]+");
  }
  if (meta.channel_count <= 0) throw ValidationError("channel_count must be positive");
  if (static_cast<std::size_t>(meta.channel_count) != meta.channel_names.size() ||
      meta.normalization.size() != meta.channel_names.size()) {
    throw ValidationError("channel_count, channel_names and normalization disagree");
  }
  for (const auto& s : meta.normalization) {
    if (!std::isfinite(s.mean) || !std::isfinite(s.std) || s.std <= 0.0) {
      throw ValidationError("normalization std must be finite and > 0");
    }
  }
  if (meta.temporal == meta.dates.empty()) {
    throw ValidationError("dates must be non-empty exactly when the profile is temporal");
  }
  for (std::size_t i = 0; i < meta.dates.size(); ++i) {
    if (!IsIsoDate(meta.dates[i])) {
      throw ValidationError("'" + meta.dates[i] + "' is not a YYYY-MM-DD date");
    }
    if (i > 0 && meta.dates[i] <= meta.dates[i - 1]) {
      throw ValidationError("dates must be strictly increasing");
    }
  }
}

ChannelStore::ChannelStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  LoadCatalog();
}

std::vector<ProfileMeta> ChannelStore::LoadCatalog() const {
  const fs::path path = root_ / "catalog.json";
  if (!fs::exists(path)) return {};
  std::vector<ProfileMeta> profiles;
  try {
    profiles = json::parse(util::ReadTextFile(path)).at("profiles")
                   .get<std::vector<ProfileMeta>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("catalog.json: ") + e.what());
  }
  std::set<std::string> seen;
  for (const auto& p : profiles) {
    ValidateProfileMeta(p);
    if (!seen.insert(p.profile_id).second) {
      throw ValidationError("catalog.json: duplicate profile_id '" + p.profile_id + "'");
    }
  }
  std::sort(profiles.begin(), profiles.end(),
            [](const auto& a, const auto& b) { return a.profile_id < b.profile_id; });
  return profiles;
}

std::string ChannelStore::RegisterProfile(const ProfileMeta& meta) {
  ValidateProfileMeta(meta);
  util::FileLock lock(root_ / ".catalog.lock");
  auto profiles = LoadCatalog();
  for (const auto& p : profiles) {
    if (p.profile_id == meta.profile_id) {
      throw ConflictError("profile '" + meta.profile_id + "' already exists");
    }
  }
  profiles.push_back(meta);
  std::sort(profiles.begin(), profiles.end(),
            [](const auto& a, const auto& b) { return a.profile_id < b.profile_id; });
  util::AtomicWriteFile(root_ / "catalog.json",
                        json{{"profiles", profiles}}.dump(2) + "\n");
  return meta.profile_id;
}

std::vector<ProfileMeta> ChannelStore::ListProfiles() const { return LoadCatalog(); }

ProfileMeta ChannelStore::GetProfile(const std::string& profile_id) const {
  for (auto& p : LoadCatalog()) {
    if (p.profile_id == profile_id) return p;
  }
  throw NotFoundError("unknown profile '" + profile_id + "'");
}

bool ChannelStore::HasProfile(const std::string& profile_id) const {
  const auto profiles = LoadCatalog();
  return std::any_of(profiles.begin(), profiles.end(),
                     [&](const auto& p) { return p.profile_id == profile_id; });
}

fs::path ChannelStore::TilePath(const std::string& profile_id,
                                const std::optional<std::string>& date,
                                const geo::TileKey& tile) const {
  fs::path p = root_ / profile_id;
  if (date) p /= *date;
  return p / "16" / std::to_string(tile.x) / (std::to_string(tile.y) + ".trc");
}

void ChannelStore::CheckDate(const ProfileMeta& meta,
                             const std::optional<std::string>& date) const {
  if (meta.temporal) {
    if (!date) {
      throw ValidationError("profile '" + meta.profile_id + "' is temporal; a date is required");
    }
    if (!std::binary_search(meta.dates.begin(), meta.dates.end(), *date)) {
      throw ValidationError("date " + *date + " is not listed for profile '" +
                            meta.profile_id + "'");
    }
  } else if (date) {
    throw ValidationError("profile '" + meta.profile_id + "' is not temporal");
  }
}

void ChannelStore::PutTile(const std::string& profile_id,
                           const std::optional<std::string>& date,
                           const SparseTileRecord& record) {
  const ProfileMeta meta = GetProfile(profile_id);
  CheckDate(meta, date);
  if (record.channels.size() != static_cast<std::size_t>(meta.channel_count)) {
    throw ValidationError("record has " + std::to_string(record.channels.size()) +
                          " channels; profile '" + profile_id + "' has " +
                          std::to_string(meta.channel_count));
  }
  const auto bytes = EncodeTrc(record);
  const fs::path path = TilePath(profile_id, date, record.tile);
  std::lock_guard<std::mutex> lock(
      key_mutexes_[std::hash<std::string>{}(path.string()) % key_mutexes_.size()]);
  util::AtomicWriteFile(path, bytes);
}

std::vector<ChannelPlane> ChannelStore::ReadPlanes(const ProfileMeta& meta,
                                                   const std::optional<std::string>& date,
                                                   const geo::TileKey& tile) const {
  const fs::path path = TilePath(meta.profile_id, date, tile);
  std::vector<ChannelPlane> planes(static_cast<std::size_t>(meta.channel_count));
  std::error_code ec;
  if (!fs::exists(path, ec)) return planes;
  const SparseTileRecord rec = DecodeTrc(util::ReadBinaryFile(path));
  if (rec.channels.size() != planes.size() || rec.tile != tile) {
    throw ValidationError(path.string() + ": record does not match its catalog entry");
  }
  for (std::size_t c = 0; c < planes.size(); ++c) planes[c] = Densify(rec.channels[c]);
  return planes;
}

std::vector<ChannelPlane> ChannelStore::GetTile(const std::string& profile_id,
                                                const geo::TileKey& tile,
                                                const std::optional<std::string>& date) const {
  const ProfileMeta meta = GetProfile(profile_id);
  CheckDate(meta, date);
  return ReadPlanes(meta, date, tile);
}

std::vector<ChannelPlane> ChannelStore::AggregateRange(const std::string& profile_id,
                                                       const geo::TileKey& tile,
                                                       const std::string& date_from,
                                                       const std::string& date_to) const {
  const ProfileMeta meta = GetProfile(profile_id);
  if (!meta.temporal) {
    throw ValidationError("profile '" + profile_id + "' is not temporal");
  }
  if (date_from > date_to) throw ValidationError("date_from is after date_to");
  const std::size_t channels = static_cast<std::size_t>(meta.channel_count);
  std::vector<std::vector<double>> sums(channels,
                                        std::vector<double>(ChannelPlane::kSize, 0.0));
  for (const auto& date : meta.dates) {
    if (date < date_from || date > date_to) continue;
    const auto planes = ReadPlanes(meta, date, tile);
    for (std::size_t c = 0; c < channels; ++c) {
      for (std::uint32_t i = 0; i < ChannelPlane::kSize; ++i) sums[c][i] += planes[c][i];
    }
  }
  std::vector<ChannelPlane> out(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::uint32_t i = 0; i < ChannelPlane::kSize; ++i) {
      out[c][i] = static_cast<float>(sums[c][i]);
    }
  }
  return out;
}

}  // namespace trinity::store
