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

#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trinity/util/fs.hpp"

namespace trinity::testing {

namespace {

double Uniform(util::Lcg64& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.NextUnit();
}

}  // namespace

store::SparseTileRecord RandomRecord(util::Lcg64& rng, const geo::TileKey& tile, int channels,
                                     Density density) {
  store::SparseTileRecord r{tile, std::vector<store::SparseChannel>(channels)};
  for (auto& ch : r.channels) {
    switch (density) {
      case Density::kEmpty:
        break;
      case Density::kSingle:
        ch.push_back({static_cast<std::uint16_t>(rng.NextBelow(65536)),
                      static_cast<float>(Uniform(rng, -10, 10))});
        break;
      case Density::kDense:
        for (std::uint32_t i = 0; i < 65536; ++i) {
          ch.push_back({static_cast<std::uint16_t>(i), static_cast<float>(Uniform(rng, -1e3, 1e3))});
        }
        break;
      case Density::kRandom: {
        const double p = rng.NextUnit() * 0.2;
        for (std::uint32_t i = 0; i < 65536; ++i) {
          if (rng.NextUnit() < p) {
            ch.push_back({static_cast<std::uint16_t>(i), static_cast<float>(Uniform(rng, -5, 5))});
          }
        }
        break;
      }
    }
    // Sparsify drops exact zeros, so keep stored values nonzero.
    for (auto& e : ch) {
      if (e.value == 0.0f) e.value = 0.5f;
    }
  }
  return r;
}

geo::LatLon TileLocalToLonLat(const geo::TileKey& tile, double lx, double ly) {
  return geo::GridToLonLat(tile.x * 256.0 + lx, tile.y * 256.0 + ly, geo::kPixelZoom);
}

geo::Geometry RandomGeometry(util::Lcg64& rng, const geo::TileKey& tile, int class_count) {
  const int tag = 1 + static_cast<int>(rng.NextBelow(static_cast<std::uint32_t>(class_count - 1)));
  // Pixel interiors only: integer part plus a fraction in [0.2, 0.8].
  auto interior = [&](double lo, double hi) {
    return std::floor(Uniform(rng, lo, hi)) + Uniform(rng, 0.2, 0.8);
  };
  auto ring = [&](double cx, double cy, double radius, int n) {
    geo::Ring out;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * (i + Uniform(rng, 0.0, 0.8)) / n;
      const double rr = radius * Uniform(rng, 0.4, 1.0);
      out.push_back(TileLocalToLonLat(tile, cx + rr * std::cos(a), cy + rr * std::sin(a)));
    }
    out.push_back(out.front());
    return out;
  };
  switch (rng.NextBelow(4)) {
    case 0:
      return geo::Geometry::Point(TileLocalToLonLat(tile, interior(0, 256), interior(0, 256)), tag);
    case 1: {
      std::vector<geo::LatLon> pts;
      const int n = 2 + static_cast<int>(rng.NextBelow(4));
      for (int i = 0; i < n; ++i) {
        pts.push_back(TileLocalToLonLat(tile, interior(-80, 336), interior(-80, 336)));
      }
      return geo::Geometry::LineString(pts, tag);
    }
    case 2: {
      const double cx = Uniform(rng, -40, 296), cy = Uniform(rng, -40, 296);
      const double r = Uniform(rng, 10, 160);
      geo::Polygon poly{ring(cx, cy, r, 3 + static_cast<int>(rng.NextBelow(10))), {}};
      if (rng.NextBelow(2) == 0) poly.holes.push_back(ring(cx, cy, r * 0.35, 5));
      return geo::Geometry::FromPolygon(poly, tag);
    }
    default: {
      geo::Geometry g;
      g.kind = geo::GeometryKind::kMultiPolygon;
      g.class_tag = tag;
      for (int k = 0; k < 2; ++k) {
        g.polygons.push_back({ring(Uniform(rng, 0, 256), Uniform(rng, 0, 256),
                                   Uniform(rng, 8, 90), 3 + static_cast<int>(rng.NextBelow(6))),
                              {}});
      }
      return g;
    }
  }
}

std::vector<kernel::Example> ThresholdExamples(int count, int channels, int size,
                                               std::uint64_t seed) {
  util::Lcg64 rng(seed);
  std::vector<kernel::Example> out;
  for (int t = 0; t < count; ++t) {
    kernel::Example ex;
    ex.tile = {static_cast<std::uint32_t>(t), 0};
    ex.image = kernel::Tensor<float>(channels, size, size);
    labels::LabelPlane label(static_cast<std::size_t>(size) * size);
    std::vector<std::array<double, 4>> waves(channels);
    for (auto& w : waves) {
      w = {Uniform(rng, 0.02, 0.07), Uniform(rng, 0.02, 0.07), Uniform(rng, 0, 6.28),
           Uniform(rng, 0, 6.28)};
    }
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        for (int c = 0; c < channels; ++c) {
          const auto& w = waves[c];
          ex.image.at(c, y, x) =
              static_cast<float>(std::sin(w[0] * x + w[2]) + std::cos(w[1] * y + w[3]));
        }
        label[static_cast<std::size_t>(y) * size + x] = ex.image.at(0, y, x) > 0.0f ? 1 : 0;
      }
    }
    ex.labels.push_back(std::move(label));
    out.push_back(std::move(ex));
  }
  return out;
}

inference::Heatmap RandomHeatmap(util::Lcg64& rng, const geo::TileKey& tile,
                                 const std::vector<int>& class_counts) {
  inference::Heatmap h{tile, {}};
  // A per-tile sharpness makes tile uncertainties spread out.
  const double sharp = Uniform(rng, 0.2, 6.0);
  for (int k : class_counts) {
    kernel::Tensor<float> t(k, 256, 256);
    for (std::size_t i = 0; i < t.plane_size(); ++i) {
      std::vector<double> e(k);
      double s = 0.0;
      for (int c = 0; c < k; ++c) s += e[c] = std::exp(sharp * Uniform(rng, -1, 1));
      for (int c = 0; c < k; ++c) t.plane(c)[i] = static_cast<float>(e[c] / s);
    }
    h.tasks.push_back(std::move(t));
  }
  return h;
}

inference::Heatmap UniformHeatmap(const geo::TileKey& tile, int class_count) {
  return {tile, {kernel::Tensor<float>(class_count, 256, 256, 1.0f / class_count)}};
}

inference::Heatmap OneHotHeatmap(const geo::TileKey& tile, int class_count) {
  kernel::Tensor<float> t(class_count, 256, 256);
  for (float& v : t.plane(0)) v = 1.0f;
  return {tile, {t}};
}

std::vector<geo::TileKey> DiscScene::Tiles() const {
  std::vector<geo::TileKey> out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out.push_back({origin.x + c, origin.y + r});
  }
  return out;
}

geo::BBox DiscScene::Region() const {
  const geo::LatLon nw = TileLocalToLonLat(origin, 1.0, 1.0);
  const geo::LatLon se = TileLocalToLonLat(origin, cols * 256.0 - 1.0, rows * 256.0 - 1.0);
  return {{nw.lon, se.lat}, {se.lon, nw.lat}};
}

store::ProfileMeta DiscScene::Profile(const std::string& profile_id) const {
  store::ProfileMeta m;
  m.profile_id = profile_id;
  m.name = "disc scene";
  m.description = "signed distance to disc targets plus two noise channels";
  m.channel_names = {"edge_distance", "noise_a", "noise_b"};
  m.channel_count = 3;
  m.normalization = {{0.0, 1.0}, {0.0, 0.5}, {0.0, 0.5}};
  return m;
}

std::vector<store::SparseTileRecord> DiscScene::Records(std::uint64_t seed) const {
  util::Lcg64 rng(seed);
  std::vector<store::SparseTileRecord> out;
  for (const auto& tile : Tiles()) {
    const double ox = (tile.x - origin.x) * 256.0, oy = (tile.y - origin.y) * 256.0;
    store::ChannelPlane dist, na, nb;
    for (std::uint32_t row = 0; row < 256; ++row) {
      for (std::uint32_t col = 0; col < 256; ++col) {
        const double x = ox + col + 0.5, y = oy + row + 0.5;
        double best = -1e9;
        for (const auto& d : discs) best = std::max(best, d.r - std::hypot(x - d.cx, y - d.cy));
        dist.at(row, col) = static_cast<float>(std::clamp(best / 24.0, -1.0, 1.0));
        na.at(row, col) = static_cast<float>(Uniform(rng, -1, 1));
        nb.at(row, col) = static_cast<float>(Uniform(rng, -1, 1));
      }
    }
    out.push_back({tile, {store::Sparsify(dist), store::Sparsify(na), store::Sparsify(nb)}});
  }
  return out;
}

std::string DiscScene::Wkt() const {
  std::ostringstream out;
  for (const auto& d : discs) {
    geo::Ring ring;
    for (int i = 0; i < 96; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 96;
      ring.push_back(TileLocalToLonLat(origin, d.cx + d.r * std::cos(a), d.cy + d.r * std::sin(a)));
    }
    ring.push_back(ring.front());
    out << geo::SerializeWktLine(geo::Geometry::FromPolygon({ring, {}}, 1)) << "\n";
  }
  return out.str();
}

void WriteProfileDir(const std::filesystem::path& dir, const store::ProfileMeta& meta,
                     const std::vector<store::SparseTileRecord>& records) {
  util::AtomicWriteFile(dir / "profile.json", nlohmann::json(meta).dump(2));
  for (const auto& r : records) {
    util::AtomicWriteFile(dir / "16" / std::to_string(r.tile.x) / (std::to_string(r.tile.y) + ".trc"),
                          store::EncodeTrc(r));
  }
}

void LoadDiscScene(const DiscScene& scene, store::ChannelStore& store,
                   labels::LabelManager& labels, const std::string& profile_id,
                   const std::string& label_set_id, std::uint64_t seed) {
  store.RegisterProfile(scene.Profile(profile_id));
  for (const auto& r : scene.Records(seed)) store.PutTile(profile_id, std::nullopt, r);
  labels.IngestWktText(scene.Wkt(), label_set_id, {{"target", 2}}, scene.Region());
}

}  // namespace trinity::testing
