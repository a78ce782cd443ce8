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

#include "trinity/dataprep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "trinity/error.hpp"
#include "trinity/geo/json.hpp"
#include "trinity/util/binary_io.hpp"
#include "trinity/util/fs.hpp"
#include "trinity/util/parallel.hpp"
#include "trinity/util/rng.hpp"

namespace trinity::dataprep {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSide = static_cast<int>(geo::kTileSize);

fs::path TilePath(const fs::path& root, const geo::TileKey& t, const char* ext) {
  return root / std::to_string(geo::kTileZoom) / std::to_string(t.x) /
         (std::to_string(t.y) + ext);
}

void CheckRange(const DateRange& r) {
  if (!store::IsIsoDate(r.from) || !store::IsIsoDate(r.to)) {
    throw ValidationError("date range bounds must be YYYY-MM-DD");
  }
  if (r.from > r.to) throw ValidationError("date range '" + r.from + "'..'" + r.to + "' is inverted");
}

std::vector<store::ChannelPlane> ReadTransient(const fs::path& dir, const geo::TileKey& tile,
                                               bool required) {
  const fs::path path = TilePath(dir, tile, ".trc");
  if (!fs::exists(path)) {
    if (required) {
      throw ValidationError("transient data missing for tile " + tile.ToString() + " (" +
                            path.string() + ")");
    }
    return {};
  }
  const auto record = store::DecodeTrc(util::ReadBinaryFile(path));
  if (!(record.tile == tile)) {
    throw ValidationError("transient file " + path.string() + " holds tile " +
                          record.tile.ToString());
  }
  std::vector<store::ChannelPlane> planes;
  for (const auto& ch : record.channels) planes.push_back(store::Densify(ch));
  return planes;
}

void WritePlane(kernel::Tensor<float>& image, int c, const store::ChannelPlane& plane,
                const store::ChannelStats& stats) {
  const auto out = Normalize(plane, stats.mean, stats.std);
  std::copy(out.values().begin(), out.values().end(), image.plane(c).begin());
}

}  // namespace

void to_json(json& j, const DateRange& r) { j = json::array({r.from, r.to}); }

void from_json(const json& j, DateRange& r) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("date range must be [from, to]");
  j[0].get_to(r.from);
  j[1].get_to(r.to);
}

void to_json(json& j, const DatasetSpec& s) {
  j = json{{"profile_ids", s.profile_ids},
           {"date_ranges", s.date_ranges},
           {"label_set_id", s.label_set_id},
           {"transient_dir", s.transient_dir ? json(s.transient_dir->string()) : json(nullptr)},
           {"val_fraction", s.val_fraction},
           {"split_seed", s.split_seed}};
}

void from_json(const json& j, DatasetSpec& s) {
  s = DatasetSpec{};
  j.at("profile_ids").get_to(s.profile_ids);
  if (j.contains("date_ranges") && !j["date_ranges"].is_null()) {
    j.at("date_ranges").get_to(s.date_ranges);
  }
  j.at("label_set_id").get_to(s.label_set_id);
  if (j.contains("transient_dir") && !j["transient_dir"].is_null()) {
    s.transient_dir = j["transient_dir"].get<std::string>();
  }
  s.val_fraction = j.value("val_fraction", kDefaultValFraction);
  s.split_seed = j.value("split_seed", std::uint64_t{0});
}

void to_json(json& j, const DatasetManifest& m) {
  json profiles = json::array();
  for (const auto& p : m.profiles) {
    profiles.push_back(json{{"profile_id", p.profile_id},
                            {"channel_count", p.channel_count},
                            {"date_range", p.date_range ? json(*p.date_range) : json(nullptr)}});
  }
  json transient = nullptr;
  if (m.transient) {
    transient = json{{"dir", m.transient->dir.string()},
                     {"channel_count", m.transient->channel_count},
                     {"channel_names", m.transient->channel_names}};
  }
  j = json{{"C", m.channel_count},
           {"channel_names", m.channel_names},
           {"profiles", profiles},
           {"transient", transient},
           {"normalization", m.normalization},
           {"label_set_id", m.label_set_id},
           {"tasks", m.tasks},
           {"train_tiles", m.train_tiles},
           {"val_tiles", m.val_tiles},
           {"spec", m.spec}};
}

void from_json(const json& j, DatasetManifest& m) {
  j.at("C").get_to(m.channel_count);
  j.at("channel_names").get_to(m.channel_names);
  m.profiles.clear();
  for (const auto& p : j.at("profiles")) {
    ProfileSource s;
    p.at("profile_id").get_to(s.profile_id);
    p.at("channel_count").get_to(s.channel_count);
    if (!p.at("date_range").is_null()) s.date_range = p["date_range"].get<DateRange>();
    m.profiles.push_back(std::move(s));
  }
  m.transient.reset();
  if (!j.at("transient").is_null()) {
    const auto& t = j["transient"];
    m.transient = TransientSource{t.at("dir").get<std::string>(),
                                  t.at("channel_count").get<int>(),
                                  t.at("channel_names").get<std::vector<std::string>>()};
  }
  j.at("normalization").get_to(m.normalization);
  j.at("label_set_id").get_to(m.label_set_id);
  j.at("tasks").get_to(m.tasks);
  j.at("train_tiles").get_to(m.train_tiles);
  j.at("val_tiles").get_to(m.val_tiles);
  j.at("spec").get_to(m.spec);
}

store::ChannelPlane Normalize(const store::ChannelPlane& plane, double mean, double std) {
  if (!(std > 0.0) || !std::isfinite(std) || !std::isfinite(mean)) {
    throw ValidationError("normalization requires finite mean and std > 0");
  }
  store::ChannelPlane out;
  for (std::size_t i = 0; i < store::ChannelPlane::kSize; ++i) {
    out[i] = static_cast<float>((static_cast<double>(plane[i]) - mean) / std);
  }
  return out;
}

std::pair<std::vector<geo::TileKey>, std::vector<geo::TileKey>> SplitTrainVal(
    std::vector<geo::TileKey> tiles, double val_fraction, std::uint64_t seed) {
  if (tiles.empty()) throw ValidationError("cannot split an empty tile list");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ValidationError("val_fraction must be in (0, 1)");
  }
  std::sort(tiles.begin(), tiles.end());
  tiles.erase(std::unique(tiles.begin(), tiles.end()), tiles.end());
  const std::size_t n = tiles.size();
  std::size_t k = static_cast<std::size_t>(std::llround(static_cast<double>(n) * val_fraction));
  if (n >= 2) k = std::clamp<std::size_t>(k, 1, n - 1);
  else k = 0;
  util::Lcg64 rng(seed);
  util::Shuffle(std::span<geo::TileKey>(tiles), rng);
  std::vector<geo::TileKey> val(tiles.begin(), tiles.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<geo::TileKey> train(tiles.begin() + static_cast<std::ptrdiff_t>(k), tiles.end());
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  return {std::move(train), std::move(val)};
}

kernel::Tensor<float> AssembleInput(const store::ChannelStore& store,
                                    const DatasetManifest& manifest, const geo::TileKey& tile,
                                    const DateOverrides& overrides) {
  if (manifest.normalization.size() != static_cast<std::size_t>(manifest.channel_count)) {
    throw ValidationError("manifest normalization does not cover every channel");
  }
  for (const auto& [id, range] : overrides) {
    const auto it = std::find_if(manifest.profiles.begin(), manifest.profiles.end(),
                                 [&](const auto& p) { return p.profile_id == id; });
    if (it == manifest.profiles.end() || !it->date_range) {
      throw ValidationError("date override for '" + id + "' which is not a temporal input");
    }
    CheckRange(range);
  }
  kernel::Tensor<float> image(manifest.channel_count, kSide, kSide);
  int c = 0;
  for (const auto& src : manifest.profiles) {
    std::vector<store::ChannelPlane> planes;
    if (src.date_range) {
      const auto it = overrides.find(src.profile_id);
      const DateRange& r = it != overrides.end() ? it->second : *src.date_range;
      planes = store.AggregateRange(src.profile_id, tile, r.from, r.to);
    } else {
      planes = store.GetTile(src.profile_id, tile);
    }
    if (planes.size() != static_cast<std::size_t>(src.channel_count)) {
      throw ValidationError("profile '" + src.profile_id + "' now has " +
                            std::to_string(planes.size()) + " channels; manifest expects " +
                            std::to_string(src.channel_count));
    }
    for (const auto& p : planes) {
      WritePlane(image, c, p, manifest.normalization[c]);
      ++c;
    }
  }
  if (manifest.transient) {
    auto planes = ReadTransient(manifest.transient->dir, tile, false);
    if (planes.empty()) planes.resize(manifest.transient->channel_count);
    if (planes.size() != static_cast<std::size_t>(manifest.transient->channel_count)) {
      throw ValidationError("transient tile " + tile.ToString() + " has " +
                            std::to_string(planes.size()) + " channels; expected " +
                            std::to_string(manifest.transient->channel_count));
    }
    for (const auto& p : planes) {
      WritePlane(image, c, p, manifest.normalization[c]);
      ++c;
    }
  }
  if (c != manifest.channel_count) {
    throw ValidationError("manifest channel count does not match its sources");
  }
  return image;
}

Dataset BuildDataset(const store::ChannelStore& store, const labels::LabelManager& labels,
                     const DatasetSpec& spec, std::size_t threads) {
  if (spec.profile_ids.empty()) throw ValidationError("a dataset needs at least one profile");
  if (!(spec.val_fraction > 0.0 && spec.val_fraction < 1.0)) {
    throw ValidationError("val_fraction must be in (0, 1)");
  }
  std::set<std::string> seen;
  for (const auto& id : spec.profile_ids) {
    if (!seen.insert(id).second) throw ValidationError("profile '" + id + "' listed twice");
  }
  for (const auto& [id, range] : spec.date_ranges) {
    if (!seen.count(id)) throw ValidationError("date range for unselected profile '" + id + "'");
    CheckRange(range);
  }

  Dataset ds;
  DatasetManifest& m = ds.manifest;
  m.spec = spec;
  for (const auto& id : spec.profile_ids) {
    const auto meta = store.GetProfile(id);
    ProfileSource src{id, meta.channel_count, std::nullopt};
    const auto it = spec.date_ranges.find(id);
    if (meta.temporal) {
      src.date_range = it != spec.date_ranges.end()
                           ? it->second
                           : DateRange{meta.dates.front(), meta.dates.back()};
    } else if (it != spec.date_ranges.end()) {
      throw ValidationError("profile '" + id + "' is not temporal; it takes no date range");
    }
    m.profiles.push_back(src);
    m.channel_names.insert(m.channel_names.end(), meta.channel_names.begin(),
                           meta.channel_names.end());
    m.normalization.insert(m.normalization.end(), meta.normalization.begin(),
                           meta.normalization.end());
  }
  m.channel_count = static_cast<int>(m.channel_names.size());

  const labels::LabelSet set = labels.Get(spec.label_set_id);
  m.label_set_id = set.label_set_id;
  m.tasks = set.task_specs();
  const auto labeled = set.AllLabeledTiles();
  if (labeled.empty()) {
    throw ValidationError("label set '" + set.label_set_id + "' has no labeled tiles");
  }
  std::tie(m.train_tiles, m.val_tiles) =
      SplitTrainVal({labeled.begin(), labeled.end()}, spec.val_fraction, spec.split_seed);

  const auto build = [&](const std::vector<geo::TileKey>& tiles) {
    std::vector<kernel::Example> out(tiles.size());
    util::ParallelFor(tiles.size(), threads, [&](std::size_t i) {
      out[i].tile = tiles[i];
      out[i].image = AssembleInput(store, m, tiles[i]);
      out[i].labels = labels::RasterizeLabelSet(set, tiles[i]).planes;
    });
    return out;
  };
  ds.train = build(m.train_tiles);
  ds.val = build(m.val_tiles);
  if (spec.transient_dir) InjectTransient(ds, *spec.transient_dir);
  return ds;
}

void InjectTransient(Dataset& dataset, const fs::path& dir) {
  DatasetManifest& m = dataset.manifest;
  if (m.transient) throw ValidationError("transient channels were already injected");
  std::vector<kernel::Example*> all;
  for (auto& ex : dataset.train) all.push_back(&ex);
  for (auto& ex : dataset.val) all.push_back(&ex);

  std::vector<std::string> names;
  std::vector<store::ChannelStats> stats;
  const fs::path stats_path = dir / "transient.json";
  if (fs::exists(stats_path)) {
    const json j = json::parse(util::ReadTextFile(stats_path));
    j.at("channel_names").get_to(names);
    if (j.contains("normalization")) j.at("normalization").get_to(stats);
    else stats.assign(names.size(), store::ChannelStats{});
    if (stats.size() != names.size()) {
      throw ValidationError("transient.json: channel_names and normalization sizes differ");
    }
  }

  std::vector<std::vector<store::ChannelPlane>> planes;
  for (const auto* ex : all) planes.push_back(ReadTransient(dir, ex->tile, true));
  std::size_t t = names.empty() && !planes.empty() ? planes.front().size() : names.size();
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (planes[i].size() != t) {
      throw ValidationError("transient tile " + all[i]->tile.ToString() + " has " +
                            std::to_string(planes[i].size()) + " channels; expected " +
                            std::to_string(t));
    }
  }
  if (t == 0) throw ValidationError("transient data has no channels");
  if (names.empty()) {
    for (std::size_t c = 0; c < t; ++c) names.push_back("transient_" + std::to_string(c));
    stats.assign(t, store::ChannelStats{});
  }

  const int base = m.channel_count;
  for (std::size_t i = 0; i < all.size(); ++i) {
    kernel::Tensor<float> image(base + static_cast<int>(t), kSide, kSide);
    std::copy(all[i]->image.data.begin(), all[i]->image.data.end(), image.data.begin());
    for (std::size_t c = 0; c < t; ++c) {
      WritePlane(image, base + static_cast<int>(c), planes[i][c], stats[c]);
    }
    all[i]->image = std::move(image);
  }
  m.transient = TransientSource{dir, static_cast<int>(t), names};
  m.channel_names.insert(m.channel_names.end(), names.begin(), names.end());
  m.normalization.insert(m.normalization.end(), stats.begin(), stats.end());
  m.channel_count = base + static_cast<int>(t);
}

std::vector<std::uint8_t> EncodeExample(const kernel::Example& ex) {
  util::ByteWriter out;
  for (float v : ex.image.data) out.F32(v);
  for (const auto& plane : ex.labels) out.Bytes(plane);
  return out.Take();
}

kernel::Example DecodeExample(std::span<const std::uint8_t> bytes, const geo::TileKey& tile,
                              int channel_count, std::size_t task_count) {
  const std::size_t px = geo::kTilePixels;
  const std::size_t expected = px * (static_cast<std::size_t>(channel_count) * 4 + task_count);
  if (bytes.size() != expected) {
    throw ValidationError("example " + tile.ToString() + ": expected " +
                          std::to_string(expected) + " bytes, found " +
                          std::to_string(bytes.size()));
  }
  util::ByteReader in(bytes, "example");
  kernel::Example ex;
  ex.tile = tile;
  ex.image = kernel::Tensor<float>(channel_count, kSide, kSide);
  for (auto& v : ex.image.data) v = in.F32();
  for (std::size_t t = 0; t < task_count; ++t) {
    const auto s = in.Bytes(px);
    ex.labels.emplace_back(s.begin(), s.end());
  }
  return ex;
}

void SaveDataset(const fs::path& dir, const Dataset& dataset) {
  for (const auto* list : {&dataset.train, &dataset.val}) {
    for (const auto& ex : *list) {
      util::AtomicWriteFile(TilePath(dir / "examples", ex.tile, ".bin"), EncodeExample(ex));
    }
  }
  util::AtomicWriteFile(dir / "manifest.json", json(dataset.manifest).dump(2) + "\n");
}

DatasetManifest LoadManifest(const fs::path& dir) {
  try {
    return json::parse(util::ReadTextFile(dir / "manifest.json")).get<DatasetManifest>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed dataset manifest: ") + e.what());
  }
}

Dataset LoadDataset(const fs::path& dir) {
  Dataset ds;
  ds.manifest = LoadManifest(dir);
  const auto load = [&](const std::vector<geo::TileKey>& tiles) {
    std::vector<kernel::Example> out;
    for (const auto& t : tiles) {
      out.push_back(DecodeExample(util::ReadBinaryFile(TilePath(dir / "examples", t, ".bin")), t,
                                  ds.manifest.channel_count, ds.manifest.tasks.size()));
    }
    return out;
  };
  ds.train = load(ds.manifest.train_tiles);
  ds.val = load(ds.manifest.val_tiles);
  return ds;
}

}  // namespace trinity::dataprep
