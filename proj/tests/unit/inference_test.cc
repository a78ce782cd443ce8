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

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/temp_dir.hpp"
#include "trinity/dataprep/dataset.hpp"
#include "trinity/error.hpp"
#include "trinity/inference/heatmap.hpp"
#include "trinity/inference/predict.hpp"
#include "trinity/inference/render.hpp"
#include "trinity/kernel/loss.hpp"
#include "trinity/util/fs.hpp"

namespace trinity::inference {
namespace {

using testing::TempDir;

std::vector<std::uint8_t> ReadBytes(const std::filesystem::path& p) {
  return util::ReadBinaryFile(p);
}

struct Scene : ::testing::Test {
  void SetUp() override {
    store = std::make_unique<store::ChannelStore>(dir.path() / "store");
    labels = std::make_unique<labels::LabelManager>(dir.path() / "labels");
    testing::LoadDiscScene(scene, *store, *labels, "disc", "discs");
    dataprep::DatasetSpec spec;
    spec.profile_ids = {"disc"};
    spec.label_set_id = "discs";
    manifest = dataprep::BuildDataset(*store, *labels, spec).manifest;
    model_spec = {kernel::kUnetMini, 3, {{"target", 2}}};
  }

  kernel::SegmentationModel<float> Model() const {
    return {model_spec, kernel::InitParameters(model_spec, 4)};
  }

  // The first two tiles of the scene's top row.
  geo::BBox TwoTiles() const {
    const auto nw = testing::TileLocalToLonLat(scene.origin, 1, 1);
    const auto se = testing::TileLocalToLonLat({scene.origin.x + 1, scene.origin.y}, 255, 255);
    return {{nw.lon, se.lat}, {se.lon, nw.lat}};
  }

  TempDir dir;
  testing::DiscScene scene;
  std::unique_ptr<store::ChannelStore> store;
  std::unique_ptr<labels::LabelManager> labels;
  dataprep::DatasetManifest manifest;
  kernel::ModelSpec model_spec;
};

TEST_F(Scene, PredictTileIsSoftmaxOfForward) {
  const auto model = Model();
  const geo::TileKey tile = scene.Tiles()[1];
  const Heatmap hm = PredictTile(model, *store, manifest, tile);
  const auto input = dataprep::AssembleInput(*store, manifest, tile);
  EXPECT_EQ(hm.tile, tile);
  ASSERT_EQ(hm.tasks.size(), 1u);
  EXPECT_EQ(hm.tasks[0], kernel::Softmax(model.Forward(input)[0]));
}

TEST_F(Scene, MissingDataUsesNormalizedZeroImage) {
  const auto model = Model();
  const geo::TileKey far{scene.origin.x + 100, scene.origin.y};
  const Heatmap hm = PredictTile(model, *store, manifest, far);
  const kernel::Tensor<float> zero(3, 256, 256);
  EXPECT_EQ(hm.tasks[0], kernel::Softmax(model.Forward(zero)[0]));
}

TEST_F(Scene, RegionOutputIndependentOfWorkers) {
  const auto model = Model();
  std::vector<std::filesystem::path> outs;
  for (std::size_t workers : {1u, 2u, 3u}) {
    outs.push_back(dir.path() / ("out" + std::to_string(workers)));
    const auto summary = PredictRegion(model, *store, manifest, TwoTiles(), outs.back(),
                                       {workers, {}, true});
    ASSERT_EQ(summary.tiles.size(), 2u);
    EXPECT_EQ(summary.tiles[0], scene.origin);
  }
  for (const auto& tile : {scene.Tiles()[0], scene.Tiles()[1]}) {
    const auto base = ReadBytes(HeatmapPath(outs[0], tile));
    EXPECT_EQ(DecodeHeatmap(base), PredictTile(model, *store, manifest, tile));
    for (std::size_t i = 1; i < outs.size(); ++i) {
      EXPECT_EQ(ReadBytes(HeatmapPath(outs[i], tile)), base);
      for (int c = 0; c < 2; ++c) {
        EXPECT_EQ(ReadBytes(VizPath(outs[i], "target", c, tile)),
                  ReadBytes(VizPath(outs[0], "target", c, tile)));
      }
    }
  }
  EXPECT_EQ(VizPath("/o", "target", 1, {5, 6}), std::filesystem::path("/o/viz/target/1/16/5/6.png"));
  EXPECT_EQ(HeatmapPath("/o", {5, 6}), std::filesystem::path("/o/16/5/6.trhm"));
}

TEST_F(Scene, IncompatibleModelWritesNothing) {
  const kernel::ModelSpec wrong{kernel::kUnetMini, 2, {{"target", 2}}};
  const kernel::SegmentationModel<float> model(wrong, kernel::InitParameters(wrong, 0));
  const auto out = dir.path() / "bad";
  EXPECT_THROW(PredictRegion(model, *store, manifest, TwoTiles(), out), ValidationError);
  EXPECT_FALSE(std::filesystem::exists(HeatmapPath(out, scene.origin)));
}

TEST_F(Scene, IngestHeatmapsAsProfile) {
  const auto model = Model();
  const auto out = dir.path() / "pred";
  const auto summary = PredictRegion(model, *store, manifest, TwoTiles(), out, {1, {}, false});
  EXPECT_FALSE(std::filesystem::exists(VizPath(out, "target", 0, scene.origin)));
  const auto meta =
      IngestHeatmapsAsProfile(*store, out, summary.tiles, model_spec.tasks, "pred_profile");
  EXPECT_EQ(meta.channel_names, (std::vector<std::string>{"target:0", "target:1"}));
  EXPECT_FALSE(meta.temporal);
  EXPECT_TRUE(store->HasProfile("pred_profile"));
  for (const auto& tile : summary.tiles) {
    const Heatmap hm = LoadHeatmap(HeatmapPath(out, tile));
    const auto planes = store->GetTile("pred_profile", tile);
    ASSERT_EQ(planes.size(), 2u);
    for (int c = 0; c < 2; ++c) {
      ASSERT_TRUE(std::equal(planes[c].values().begin(), planes[c].values().end(),
                             hm.tasks[0].plane(c).begin()));
    }
  }
  EXPECT_THROW(IngestHeatmapsAsProfile(*store, out, summary.tiles, model_spec.tasks,
                                       "pred_profile"),
               ConflictError);
}

TEST(HeatmapCodec, RoundTripAndHeader) {
  util::Lcg64 rng(1);
  const Heatmap hm = testing::RandomHeatmap(rng, {7, 9}, {2, 3});
  const auto bytes = EncodeHeatmap(hm);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "TRHM");
  EXPECT_EQ(bytes.size(), 4u + 2 + 4 + 4 + 2 + 2 * 2 + 5u * 65536 * 4);
  EXPECT_EQ(DecodeHeatmap(bytes), hm);
  const TrhmHeader h = InspectHeatmap(bytes);
  EXPECT_EQ(h.tile, (geo::TileKey{7, 9}));
  EXPECT_EQ(h.class_counts, (std::vector<std::uint16_t>{2, 3}));
  auto bad = bytes;
  bad[1] = 'X';
  EXPECT_THROW(DecodeHeatmap(bad), Error);
  EXPECT_THROW(DecodeHeatmap(std::span(bytes).first(bytes.size() - 1)), Error);
}

TEST(Render, GrayLevels) {
  const std::vector<float> c = {0.0f, 1.0f, 0.5f, -0.2f, 1.3f, 0.25f, 0.998f};
  EXPECT_EQ(ConfidenceToGray(c), (std::vector<std::uint8_t>{0, 255, 128, 0, 255, 64, 254}));
}

TEST(Render, PngRoundTrip) {
  std::vector<std::uint8_t> rgb(5 * 3 * 3);
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = static_cast<std::uint8_t>(i * 7);
  const auto png = EncodePng(5, 3, 3, rgb);
  EXPECT_EQ(png[1], 'P');
  const DecodedPng d = DecodePng(png);
  EXPECT_EQ(d.width, 5);
  EXPECT_EQ(d.height, 3);
  EXPECT_EQ(d.channels, 3);
  EXPECT_EQ(d.pixels, rgb);
  EXPECT_THROW(EncodePng(5, 3, 2, rgb), ValidationError);
}

TEST(Render, HeatmapPngMatchesGrayLevels) {
  util::Lcg64 rng(2);
  const Heatmap hm = testing::RandomHeatmap(rng, {1, 1}, {3});
  const DecodedPng d = DecodePng(RenderHeatmapPng(hm, 0, 2));
  EXPECT_EQ(d.channels, 1);
  EXPECT_EQ(d.pixels, ConfidenceToGray(hm.tasks[0].plane(2)));
  EXPECT_THROW(RenderHeatmapPng(hm, 0, 3), Error);
}

TEST(Render, DominantClassTiesGoLow) {
  Heatmap hm = testing::UniformHeatmap({1, 1}, 3);
  hm.tasks[0].plane(2)[5] = 0.5f;
  const std::vector<Rgb> palette = {{{0, 0, 0}}, {{255, 0, 0}}, {{0, 0, 255}}};
  const auto rgb = DominantClassRgb(hm, 0, palette);
  EXPECT_EQ(rgb[0], 0);
  EXPECT_EQ(rgb[5 * 3 + 2], 255);
  EXPECT_THROW(DominantClassRgb(hm, 0, {palette[0]}), ValidationError);
  const DecodedPng d = DecodePng(RenderDominantClassPng(hm, 0, palette));
  EXPECT_EQ(d.pixels, rgb);
}

}  // namespace
}  // namespace trinity::inference
