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

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "trinity/error.hpp"
#include "trinity/postprocess/cluster.hpp"
#include "trinity/postprocess/export.hpp"
#include "trinity/postprocess/map_match.hpp"
#include "trinity/postprocess/predicate.hpp"
#include "trinity/util/rng.hpp"

namespace trinity::postprocess {
namespace {

TEST(Threshold, MatchesLinearScan) {
  util::Lcg64 rng(1);
  const std::vector<inference::Heatmap> hms = {testing::RandomHeatmap(rng, {40, 50}, {2, 3}),
                                               testing::RandomHeatmap(rng, {41, 49}, {2, 3})};
  for (double tau : {0.3, 0.7, 1.0}) {
    std::vector<WeightedPixel> want;
    for (const auto& hm : hms) {
      const auto plane = hm.tasks[1].plane(2);
      for (std::uint32_t i = 0; i < 65536; ++i) {
        if (plane[i] >= tau) want.push_back({hm.tile.x * 256 + i % 256, hm.tile.y * 256 + i / 256, plane[i]});
      }
    }
    EXPECT_EQ(ThresholdFilter(hms, 1, 2, tau), want) << tau;
  }
  EXPECT_THROW(ThresholdFilter(hms, 1, 2, 0.0), ValidationError);
  EXPECT_THROW(ThresholdFilter(hms, 1, 2, 1.5), ValidationError);
  EXPECT_THROW(ThresholdFilter(hms, 2, 0, 0.5), Error);
  EXPECT_THROW(ThresholdFilter(hms, 0, 2, 0.5), Error);
}

std::vector<WeightedPixel> Blobs(util::Lcg64& rng, int blobs, int per_blob, int scatter) {
  std::vector<WeightedPixel> pts;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (int b = 0; b < blobs; ++b) {
    const std::uint32_t cx = 1000 + rng.NextBelow(400), cy = 2000 + rng.NextBelow(400);
    for (int i = 0; i < per_blob; ++i) {
      const std::uint32_t x = cx + rng.NextBelow(12), y = cy + rng.NextBelow(12);
      if (seen.insert({x, y}).second) pts.push_back({x, y, 0.5 + 0.5 * rng.NextUnit()});
    }
  }
  for (int i = 0; i < scatter; ++i) {
    const std::uint32_t x = 1000 + rng.NextBelow(420), y = 2000 + rng.NextBelow(420);
    if (seen.insert({x, y}).second) pts.push_back({x, y, 0.5 + 0.5 * rng.NextUnit()});
  }
  // Shuffled so input order differs from spatial order.
  util::Shuffle(std::span<WeightedPixel>(pts), rng);
  return pts;
}

TEST(Dbscan, MatchesNaiveWeighted) {
  util::Lcg64 rng(2);
  for (int trial = 0; trial < 6; ++trial) {
    const auto pts = Blobs(rng, 5, 40, 60);
    for (double eps : {1.5, 3.0, 5.0}) {
      for (double w : {1.0, 3.0, 6.0}) {
        ASSERT_EQ(WeightedDbscan(pts, eps, w), testing::NaiveWeightedDbscan(pts, eps, w))
            << trial << " eps=" << eps << " w=" << w;
      }
    }
  }
}

TEST(Dbscan, UnitWeightsMatchClassic) {
  util::Lcg64 rng(3);
  auto pts = Blobs(rng, 4, 30, 40);
  std::vector<std::pair<double, double>> xy;
  for (auto& p : pts) {
    p.weight = 1.0;
    xy.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  }
  for (int min_pts : {2, 4, 7}) {
    EXPECT_EQ(WeightedDbscan(pts, 2.5, min_pts), testing::ClassicDbscan(xy, 2.5, min_pts));
  }
}

TEST(Dbscan, EpsIsInclusive) {
  const std::vector<WeightedPixel> pts = {{0, 0, 1.0}, {3, 4, 1.0}};
  EXPECT_EQ(WeightedDbscan(pts, 5.0, 2.0).clusters.size(), 1u);
  EXPECT_EQ(WeightedDbscan(pts, 4.999, 2.0).noise, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(WeightedDbscan(pts, 0.0, 1.0), ValidationError);
  EXPECT_THROW(WeightedDbscan(pts, 1.0, 0.0), ValidationError);
  EXPECT_EQ(WeightedDbscan({}, 1.0, 1.0), ClusterResult{});
}

double Shoelace(const std::vector<std::pair<std::int64_t, std::int64_t>>& ring) {
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& p = ring[i];
    const auto& q = ring[(i + 1) % ring.size()];
    a += static_cast<double>(p.first) * q.second - static_cast<double>(q.first) * p.second;
  }
  return std::abs(a) / 2.0;
}

// Every pixel corner lies on or to the left of each hull edge when y points
// north, consecutive edges turn strictly left and vertices are pixel corners.
void ExpectValidHull(const std::vector<WeightedPixel>& pts, const std::vector<std::size_t>& members,
                     const std::vector<std::pair<std::int64_t, std::int64_t>>& hull) {
  std::set<std::pair<std::int64_t, std::int64_t>> corners;
  for (auto i : members) {
    for (int dx : {0, 1}) {
      for (int dy : {0, 1}) corners.insert({pts[i].x + dx, pts[i].y + dy});
    }
  }
  ASSERT_GE(hull.size(), 3u);
  const auto cross = [](auto a, auto b, auto c) {
    // In (x, -y) coordinates.
    return static_cast<double>(b.first - a.first) * -(c.second - a.second) -
           static_cast<double>(-(b.second - a.second)) * (c.first - a.first);
  };
  for (std::size_t i = 0; i < hull.size(); ++i) {
    EXPECT_TRUE(corners.count(hull[i]));
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    const auto& c = hull[(i + 2) % hull.size()];
    EXPECT_GT(cross(a, b, c), 0.0);
    for (const auto& p : corners) ASSERT_GE(cross(a, b, p), 0.0);
  }
}

TEST(Hull, SimpleShapes) {
  const std::vector<WeightedPixel> one = {{10, 20, 1.0}};
  const auto h1 = PixelHull(one, {0});
  EXPECT_EQ(h1.size(), 4u);
  EXPECT_EQ(Shoelace(h1), 1.0);
  ExpectValidHull(one, {0}, h1);

  std::vector<WeightedPixel> row;
  for (std::uint32_t i = 0; i < 5; ++i) row.push_back({100 + i, 7, 1.0});
  const auto h2 = PixelHull(row, {0, 1, 2, 3, 4});
  EXPECT_EQ(h2.size(), 4u);
  EXPECT_EQ(Shoelace(h2), 5.0);

  // L shape: hull area is the 3x3 box minus the cut corner triangle.
  const std::vector<WeightedPixel> ell = {{0, 0, 1}, {0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 2, 1}};
  const auto h3 = PixelHull(ell, {0, 1, 2, 3, 4});
  ExpectValidHull(ell, {0, 1, 2, 3, 4}, h3);
  EXPECT_EQ(Shoelace(h3), 9.0 - 2.0);
}

TEST(Hull, RandomClustersAreValid) {
  util::Lcg64 rng(4);
  const auto pts = Blobs(rng, 4, 50, 0);
  const auto result = WeightedDbscan(pts, 2.0, 2.0);
  ASSERT_FALSE(result.clusters.empty());
  const auto polys = ClustersToPolygons(result, pts);
  ASSERT_EQ(polys.size(), result.clusters.size());
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const auto& members = result.clusters[k];
    const auto hull = PixelHull(pts, members);
    ExpectValidHull(pts, members, hull);
    const auto& p = polys[k];
    EXPECT_EQ(p.cluster_id, k);
    EXPECT_EQ(p.pixel_count, members.size());
    EXPECT_DOUBLE_EQ(p.area_px, Shoelace(hull));
    double w = 0.0;
    for (auto i : members) w += pts[i].weight;
    EXPECT_NEAR(p.weight_sum, w, 1e-12);
    EXPECT_NEAR(p.score, w / members.size(), 1e-12);
    const auto& ring = p.polygon.polygons.at(0).outer;
    EXPECT_EQ(ring.size(), hull.size() + 1);
    EXPECT_EQ(ring.front(), ring.back());
    const auto g = geo::GridToLonLat(static_cast<double>(hull[0].first),
                                     static_cast<double>(hull[0].second), 24);
    EXPECT_NEAR(ring[0].lon, g.lon, 1e-12);
    EXPECT_NEAR(ring[0].lat, g.lat, 1e-12);
  }
}

std::vector<RoadSegment> Network(const geo::TileKey& t) {
  const auto at = [&](double x, double y) { return testing::TileLocalToLonLat(t, x, y); };
  return {{"b", {at(10, 10), at(200, 10)}, {{"highway", "primary"}}},
          {"a", {at(10, 40), at(100, 40), at(100, 200)}, {{"highway", "residential"}}},
          {"c", {at(240, 240), at(250, 250)}, {}}};
}

TEST(MapMatch, MatchesNaive) {
  const geo::TileKey tile{10496, 25344};
  const auto net = Network(tile);
  util::Lcg64 rng(5);
  std::vector<WeightedPixel> pts;
  for (int i = 0; i < 400; ++i) {
    pts.push_back({tile.x * 256 + rng.NextBelow(256), tile.y * 256 + rng.NextBelow(256),
                   rng.NextUnit()});
  }
  // Equidistant from both segments: y = 25 lies 15 px from y = 10 and y = 40.
  pts.push_back({tile.x * 256 + 50, tile.y * 256 + 24, 1.0});
  // A zoom-24 pixel is about 1.9 m here.
  for (double radius : {10.0, 40.0, 300.0}) {
    const auto naive = testing::NaiveMapMatch(pts, net, radius);
    const auto got = MapMatch(pts, net, radius, 0.0);
    ASSERT_EQ(got.size(), naive.size());
    std::size_t matched = 0;
    for (const auto& s : got) matched += s.point_count;
    EXPECT_GT(matched, 0u);
    for (const auto& s : got) {
      const auto& n = naive.at(s.segment_id);
      EXPECT_NEAR(s.weight_sum, n.weight_sum, 1e-9) << s.segment_id;
      EXPECT_NEAR(s.length_px, n.length_px, 1e-6) << s.segment_id;
      EXPECT_NEAR(s.score, n.score, 1e-9) << s.segment_id;
    }
    for (std::size_t i = 1; i < got.size(); ++i) {
      EXPECT_TRUE(got[i - 1].score > got[i].score ||
                  (got[i - 1].score == got[i].score && got[i - 1].segment_id < got[i].segment_id));
    }
  }
}

TEST(MapMatch, TieGoesToSmallestId) {
  const geo::TileKey tile{10496, 25344};
  const auto net = Network(tile);
  // Pixel centre (50.5, 24.5) sits 14.5 px from "b" and 15.5 px from "a".
  const std::vector<WeightedPixel> near_b = {{tile.x * 256 + 50, tile.y * 256 + 24, 1.0}};
  const auto r1 = MapMatch(near_b, net, 100.0, 0.0);
  EXPECT_EQ(r1.front().segment_id, "b");
  // Centre (50.5, 24.5) vs a horizontal pair at y = 9.5 and y = 39.5: both 15 px.
  const auto at = [&](double x, double y) { return testing::TileLocalToLonLat(tile, x, y); };
  const std::vector<RoadSegment> pair = {{"z", {at(0, 9.5), at(200, 9.5)}, {}},
                                         {"y", {at(0, 39.5), at(200, 39.5)}, {}}};
  const auto r2 = MapMatch(near_b, pair, 100.0, 0.0);
  const auto y = std::find_if(r2.begin(), r2.end(), [](const auto& s) { return s.segment_id == "y"; });
  EXPECT_EQ(y->point_count, 1u);
}

TEST(MapMatch, ScoreThresholdAndDistance) {
  const geo::TileKey tile{10496, 25344};
  const auto net = Network(tile);
  EXPECT_TRUE(MapMatch({}, net, 1.0, 0.001).empty());
  EXPECT_THROW(MapMatch({}, net, 0.0, 0.0), ValidationError);
  const std::vector<geo::WorldPoint> line = {{0, 0}, {10, 0}, {10, 10}};
  EXPECT_DOUBLE_EQ(PointToPolylinePx(5, 3, line), 3.0);
  EXPECT_DOUBLE_EQ(PointToPolylinePx(13, 14, line), 5.0);
  EXPECT_DOUBLE_EQ(PointToPolylinePx(-3, -4, line), 5.0);
}

TEST(RoadNetwork, Parse) {
  const auto net = ParseRoadNetwork(
      "LINESTRING (-122.1 37.3, -122.09 37.31)\tseg1\thighway=primary;lanes=2\n"
      "# comment\n"
      "LINESTRING (-122.1 37.3, -122.2 37.3)\tseg2\n");
  ASSERT_EQ(net.size(), 2u);
  EXPECT_EQ(net[0].segment_id, "seg1");
  EXPECT_EQ(net[0].attributes.at("lanes"), "2");
  EXPECT_TRUE(net[1].attributes.empty());
  try {
    ParseRoadNetwork("LINESTRING (0 0, 1 1)\ta\nPOINT (0 0)\tb\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(ParseRoadNetwork("LINESTRING (0 0, 1 1)\n"), ParseError);
  EXPECT_THROW(ParseRoadNetwork("LINESTRING (0 0, 1 1)\ta\nLINESTRING (0 0, 1 2)\ta\n"),
               ValidationError);
}

TEST(Predicate, ParseAndMatch) {
  const auto atoms = ParsePredicate("score >= 0.5 && attr:highway == primary, area_px<10");
  ASSERT_EQ(atoms.size(), 3u);
  EXPECT_EQ(atoms[1].field, "attr:highway");
  EXPECT_EQ(atoms[2].op, CompareOp::kLt);
  FilterItem item{{{"score", 0.5}, {"area_px", 9.0}, {"weight_sum", 3.0}},
                  {{"highway", "primary"}}};
  EXPECT_TRUE(Matches(item, atoms));
  item.numbers["area_px"] = 10.0;
  EXPECT_FALSE(Matches(item, atoms));
  EXPECT_TRUE(Matches(item, ParsePredicate("")));
  EXPECT_TRUE(Matches(item, ParsePredicate("weight_sum != 2.5")));
  EXPECT_TRUE(Matches(item, ParsePredicate("attr:highway != secondary")));
  EXPECT_FALSE(Matches(item, ParsePredicate("attr:lanes == 2")));
  EXPECT_TRUE(Matches(item, ParsePredicate("attr:lanes != 2")));
  EXPECT_THROW(Matches(FilterItem{}, ParsePredicate("score > 0")), ValidationError);
}

TEST(Predicate, RejectsMalformed) {
  EXPECT_THROW(ParsePredicate("colour == red"), ValidationError);
  EXPECT_THROW(ParsePredicate("attr:highway < primary"), ValidationError);
  EXPECT_THROW(ParsePredicate("score >= abc"), ValidationError);
  EXPECT_THROW(ParsePredicate("score"), ValidationError);
  EXPECT_THROW(ParsePredicate("score >= 1 &&"), ValidationError);
}

TEST(Predicate, FilterKeepsInputOrder) {
  std::vector<FilterItem> items;
  for (double s : {0.9, 0.1, 0.6, 0.4, 0.75}) items.push_back({{{"score", s}}, {}});
  EXPECT_EQ(PredicateFilter(items, ParsePredicate("score > 0.5")),
            (std::vector<std::size_t>{0, 2, 4}));
}

TEST(Export, WktAndGeoJson) {
  util::Lcg64 rng(6);
  const auto pts = Blobs(rng, 3, 30, 0);
  const auto polys = ClustersToPolygons(WeightedDbscan(pts, 2.0, 2.0), pts);
  const auto records = geo::ParseWktRecords(PolygonsToWkt(polys));
  ASSERT_EQ(records.size(), polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    EXPECT_EQ(records[i].geometry.kind, geo::GeometryKind::kPolygon);
    ASSERT_EQ(records[i].suffix.size(), 1u);
    EXPECT_NEAR(std::stod(records[i].suffix[0]), polys[i].score, 1e-6);
  }
  const auto gj = PolygonsToGeoJson(polys);
  EXPECT_EQ(gj.at("type"), "FeatureCollection");
  EXPECT_EQ(gj.at("features").size(), polys.size());
  EXPECT_EQ(ToFilterItem(polys[0]).numbers.at("area_px"), polys[0].area_px);

  const geo::TileKey tile{10496, 25344};
  const auto net = Network(tile);
  const std::vector<WeightedPixel> on_b = {{tile.x * 256 + 50, tile.y * 256 + 10, 1.0}};
  const auto scores = MapMatch(on_b, net, 20.0, 0.0);
  const auto seg = geo::ParseWktRecords(SegmentsToWkt(scores, net));
  EXPECT_EQ(seg.size(), scores.size());
  EXPECT_EQ(SegmentsToGeoJson(scores, net).at("features").size(), scores.size());
  EXPECT_EQ(ToFilterItem(scores[0]).attributes, scores[0].attributes);
}

}  // namespace
}  // namespace trinity::postprocess
