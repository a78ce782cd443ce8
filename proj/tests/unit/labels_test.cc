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
#include <fstream>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"
#include "trinity/error.hpp"
#include "trinity/labels/label_set.hpp"
#include "trinity/labels/rasterize.hpp"

namespace trinity::labels {
namespace {

using testing::RandomGeometry;
using testing::RasterizeOracle;
using testing::TempDir;
using testing::TileLocalToLonLat;

const geo::TileKey kTile{10496, 25344};

geo::Geometry Square(const geo::TileKey& tile, double x0, double y0, double x1, double y1,
                     int tag) {
  geo::Ring r = {TileLocalToLonLat(tile, x0, y0), TileLocalToLonLat(tile, x1, y0),
                 TileLocalToLonLat(tile, x1, y1), TileLocalToLonLat(tile, x0, y1),
                 TileLocalToLonLat(tile, x0, y0)};
  return geo::Geometry::FromPolygon({r, {}}, tag);
}

geo::BBox TileBox(const geo::TileKey& tile) {
  const auto nw = TileLocalToLonLat(tile, 1, 1), se = TileLocalToLonLat(tile, 255, 255);
  return {{nw.lon, se.lat}, {se.lon, nw.lat}};
}

TEST(Rasterize, EmptyIsBackground) {
  const auto plane = Rasterize({}, kTile, 2);
  EXPECT_EQ(plane, LabelPlane(65536, 0));
}

TEST(Rasterize, CoveringPolygonFillsTile) {
  const std::vector<geo::Geometry> g = {Square(kTile, -10, -10, 300, 300, 1)};
  EXPECT_EQ(Rasterize(g, kTile, 2), LabelPlane(65536, 1));
}

TEST(Rasterize, TagOutOfRange) {
  const std::vector<geo::Geometry> g = {Square(kTile, 0, 0, 10, 10, 2)};
  EXPECT_THROW(Rasterize(g, kTile, 2), ValidationError);
  const std::vector<geo::Geometry> zero = {Square(kTile, 0, 0, 10, 10, 0)};
  EXPECT_THROW(Rasterize(zero, kTile, 2), ValidationError);
}

TEST(Rasterize, MatchesOracleOnRandomGeometries) {
  util::Lcg64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const geo::TileKey tile{30000 + rng.NextBelow(1000), 20000 + rng.NextBelow(1000)};
    std::vector<geo::Geometry> g;
    const int n = 1 + static_cast<int>(rng.NextBelow(4));
    for (int i = 0; i < n; ++i) g.push_back(RandomGeometry(rng, tile, 4));
    ASSERT_EQ(Rasterize(g, tile, 4), RasterizeOracle(g, tile)) << "trial " << trial;
  }
}

TEST(Rasterize, HolesSubtract) {
  geo::Geometry g = Square(kTile, 10, 10, 100, 100, 1);
  g.polygons[0].holes.push_back(Square(kTile, 40, 40, 60, 60, 1).polygons[0].outer);
  const auto plane = Rasterize(std::vector{g}, kTile, 2);
  EXPECT_EQ(plane[20 * 256 + 20], 1);
  EXPECT_EQ(plane[50 * 256 + 50], 0);
  EXPECT_EQ(plane, RasterizeOracle({g}, kTile));
}

TEST(Rasterize, LastGeometryWins) {
  const auto a = Square(kTile, 10, 10, 100, 100, 1);
  const auto b = Square(kTile, 50, 50, 150, 150, 2);
  const auto ab = Rasterize(std::vector{a, b}, kTile, 3);
  const auto ba = Rasterize(std::vector{b, a}, kTile, 3);
  EXPECT_EQ(ab[75 * 256 + 75], 2);
  EXPECT_EQ(ba[75 * 256 + 75], 1);
}

TEST(Rasterize, DisjointOrderInvariant) {
  const auto a = Square(kTile, 10, 10, 40, 40, 1);
  const auto b = Square(kTile, 100, 100, 150, 150, 2);
  EXPECT_EQ(Rasterize(std::vector{a, b}, kTile, 3), Rasterize(std::vector{b, a}, kTile, 3));
}

TEST(Rasterize, DiagonalLineIsEightConnected) {
  const auto line = geo::Geometry::LineString(
      {TileLocalToLonLat(kTile, 3.5, 7.5), TileLocalToLonLat(kTile, 203.5, 60.5)}, 1);
  const auto plane = Rasterize(std::vector{line}, kTile, 2);
  // One pixel per column along the x-major trace.
  for (int x = 3; x <= 203; ++x) {
    int hits = 0;
    for (int y = 0; y < 256; ++y) hits += plane[y * 256 + x];
    ASSERT_EQ(hits, 1) << "column " << x;
  }
  EXPECT_EQ(plane[7 * 256 + 3], 1);
  EXPECT_EQ(plane[60 * 256 + 203], 1);
}

TEST(DigitalSegment, HalfUpRounding) {
  // From (0,0) to (4,1): ideal y at x=2 is 0.5, which rounds up to 1.
  const auto s = DigitalSegment::Between({0, 0}, {4, 1});
  EXPECT_TRUE(s.Contains(1, 0));
  EXPECT_TRUE(s.Contains(2, 1));
  EXPECT_FALSE(s.Contains(2, 0));
  EXPECT_TRUE(s.Contains(4, 1));
}

LabelSet TwoTaskSet() {
  LabelSet set;
  set.label_set_id = "two";
  set.tasks.push_back({{"roads", 2}, {Square(kTile, 10, 10, 50, 50, 1)}, {kTile}});
  set.tasks.push_back({{"lots", 2}, {}, {}});
  return set;
}

TEST(RasterizeLabelSet, UnlabeledTaskIsIgnore) {
  const LabelRaster r = RasterizeLabelSet(TwoTaskSet(), kTile);
  ASSERT_EQ(r.planes.size(), 2u);
  EXPECT_EQ(r.planes[0][20 * 256 + 20], 1);
  EXPECT_EQ(r.planes[0][100 * 256 + 100], 0);
  EXPECT_EQ(r.planes[1], LabelPlane(65536, kIgnore));
}

TEST(RasterizeLabelSet, LabeledRegionWithoutGeometryIsBackground) {
  LabelSet set = TwoTaskSet();
  const geo::TileKey empty{kTile.x + 5, kTile.y};
  set.tasks[0].labeled_tiles.insert(empty);
  const LabelRaster r = RasterizeLabelSet(set, empty);
  EXPECT_EQ(r.planes[0], LabelPlane(65536, 0));
  EXPECT_EQ(r.planes[1], LabelPlane(65536, kIgnore));
}

TEST(RasterizeLabelSet, MultiClassMatchesOracle) {
  util::Lcg64 rng(4);
  LabelSet set;
  set.label_set_id = "roadtypes";
  std::vector<geo::Geometry> g;
  for (int i = 0; i < 6; ++i) g.push_back(RandomGeometry(rng, kTile, 3));
  set.tasks.push_back({{"road_type", 3}, g, {kTile}});
  set.tasks.push_back({{"other", 2}, {}, {}});
  const LabelRaster r = RasterizeLabelSet(set, kTile);
  EXPECT_EQ(r.planes[0], RasterizeOracle(g, kTile));
  for (auto v : r.planes[0]) ASSERT_TRUE(v <= 2);
  EXPECT_EQ(r.planes[1], LabelPlane(65536, kIgnore));
}

TEST(TaskSpecs, Validation) {
  EXPECT_THROW(ValidateTaskSpecs({{"a", 2}, {"a", 3}}), ValidationError);
  EXPECT_THROW(ValidateTaskSpecs({{"a", 1}}), ValidationError);
  EXPECT_THROW(ValidateTaskSpecs({{"a b", 2}}), ValidationError);
  EXPECT_THROW(ValidateTaskSpecs({}), ValidationError);
  EXPECT_NO_THROW(ValidateTaskSpecs({{"roads", 2}, {"road_type-2", 5}}));
}

const char* kThreeLines =
    "POLYGON ((-122.1 37.3, -122.09 37.3, -122.09 37.31, -122.1 37.31, -122.1 37.3))\t1\n"
    "POINT (-122.095 37.305)\n"
    "LINESTRING (-122.1 37.3, -122.09 37.31)\t1\n";

TEST(LabelManager, IngestThreeLines) {
  TempDir dir;
  LabelManager m(dir.path());
  const geo::BBox region{{-122.1, 37.3}, {-122.09, 37.31}};
  const LabelSet set = m.IngestWktText(kThreeLines, "ls1", {{"lots", 2}}, region);
  ASSERT_EQ(set.tasks.size(), 1u);
  EXPECT_EQ(set.tasks[0].geometries.size(), 3u);
  EXPECT_EQ(set.tasks[0].labeled_tiles.size(), geo::TilesCovering(region).size());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "ls1.json"));
  EXPECT_EQ(m.Get("ls1"), set);
  EXPECT_EQ(m.List(), std::vector<std::string>{"ls1"});
}

TEST(LabelManager, IngestErrors) {
  TempDir dir;
  LabelManager m(dir.path());
  const geo::BBox region{{-122.1, 37.3}, {-122.09, 37.31}};
  EXPECT_THROW(m.IngestWktText("POINT (-122.095 37.305)\t7\n", "bad", {{"a", 2}}, region),
               ValidationError);
  try {
    m.IngestWktText("POINT (-122.095 37.305)\nPOINT (oops)\n", "bad", {{"a", 2}}, region);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  m.IngestWktText(kThreeLines, "ls1", {{"lots", 2}}, region);
  EXPECT_THROW(m.IngestWktText(kThreeLines, "ls1", {{"lots", 2}}, region), ConflictError);
  EXPECT_FALSE(m.Has("bad"));
}

TEST(LabelManager, IngestFile) {
  TempDir dir;
  const auto path = dir.path() / "labels.wkt";
  std::ofstream(path) << kThreeLines;
  LabelManager m(dir.path() / "labels");
  const LabelSet set =
      m.IngestWktFile(path, "f", {{"other", 2}, {"lots", 2}}, {{-122.1, 37.3}, {-122.1, 37.3}}, 1);
  EXPECT_TRUE(set.tasks[0].geometries.empty());
  EXPECT_TRUE(set.tasks[0].labeled_tiles.empty());
  EXPECT_EQ(set.tasks[1].geometries.size(), 3u);
}

TEST(LabelManager, TasksAndAnnotations) {
  TempDir dir;
  LabelManager m(dir.path());
  m.IngestWktText("", "ls", {{"lots", 2}}, TileBox(kTile));
  std::vector<geo::TileKey> tiles;
  for (std::uint32_t i = 0; i < 5; ++i) tiles.push_back({kTile.x + i, kTile.y + 1});
  auto with_dups = tiles;
  with_dups.push_back(tiles[0]);
  with_dups.push_back(tiles[3]);
  const LabelTask task = m.CreateTask("ls", "lots", with_dups, TaskOrigin::kActiveLearning);
  EXPECT_EQ(task.tiles.size(), 5u);
  EXPECT_EQ(task.status, TaskStatus::kOpen);
  EXPECT_EQ(task.origin, TaskOrigin::kActiveLearning);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "tasks" / (task.task_id + ".json")));
  EXPECT_EQ(m.ListTasks().size(), 1u);

  const geo::TileKey t0 = tiles[0];
  const auto a = Square(t0, 10, 10, 60, 60, 1);
  const auto b = Square(t0, 100, 120, 140, 200, 1);
  const std::string wkt = geo::SerializeWktLine(a) + "\n" + geo::SerializeWktLine(b) + "\n";
  const LabelSet updated = m.AddAnnotations(task.task_id, wkt);
  EXPECT_EQ(updated.tasks[0].geometries.size(), 2u);
  for (const auto& t : tiles) EXPECT_TRUE(updated.tasks[0].labeled_tiles.count(t));
  EXPECT_EQ(m.GetTask(task.task_id).status, TaskStatus::kCompleted);
  EXPECT_EQ(RasterizeLabelSet(updated, t0).planes[0], RasterizeOracle({a, b}, t0));

  EXPECT_THROW(m.AddAnnotations(task.task_id, wkt), StateError);
  EXPECT_THROW(m.AddAnnotations("lt-999999", wkt), NotFoundError);
}

TEST(LabelManager, CreateTaskValidation) {
  TempDir dir;
  LabelManager m(dir.path());
  m.IngestWktText("", "ls", {{"lots", 2}}, TileBox(kTile));
  EXPECT_THROW(m.CreateTask("ls", "lots", {}, TaskOrigin::kManual), ValidationError);
  EXPECT_THROW(m.CreateTask("ls", "nope", {kTile}, TaskOrigin::kManual), Error);
  EXPECT_THROW(m.CreateTask("missing", "lots", {kTile}, TaskOrigin::kManual), Error);
}

TEST(LabelManager, CopyKeepsContent) {
  TempDir dir;
  LabelManager m(dir.path());
  m.IngestWktText(kThreeLines, "src", {{"lots", 2}}, {{-122.1, 37.3}, {-122.09, 37.31}});
  const LabelSet copy = m.Copy("src", "dst");
  EXPECT_EQ(copy.label_set_id, "dst");
  EXPECT_EQ(copy.tasks, m.Get("src").tasks);
  EXPECT_THROW(m.Copy("src", "dst"), ConflictError);
}

}  // namespace
}  // namespace trinity::labels
