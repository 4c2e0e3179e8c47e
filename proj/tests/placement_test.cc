// Copyright 2026 The Zebrasynth Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "zebrasynth/placement.h"

#include <memory>
#include <set>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "zebrasynth/error.h"

namespace zebrasynth {
namespace {

std::shared_ptr<const Terrain> FlatTerrain(double side, double h) {
  const int n = static_cast<int>(side) + 1;
  return std::make_shared<const Terrain>(0.0, 0.0, 1.0, n, n,
                                         std::vector<double>(static_cast<size_t>(n) * n, h));
}

std::shared_ptr<const AssetCatalog> SmallCatalog() {
  AssetParams p;
  p.sequences = 4;
  p.total_frames = 12;
  return std::make_shared<const AssetCatalog>(BuildCatalog(p));
}

TEST(SampleRectangleTest, SidesAndContainment) {
  const Rect2 extent{0, 0, 500, 500};
  const PlacementParams params;
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const PlacementRect r = SampleRectangle(extent, params, rng);
    ASSERT_GE(r.side_x, 40.0);
    ASSERT_LE(r.side_x, 120.0);
    ASSERT_GE(r.side_y, 40.0);
    ASSERT_LE(r.side_y, 120.0);
    ASSERT_FALSE(r.clamped);
    const Rect2 b = r.Bounds();
    ASSERT_GE(b.x_min, 0.0);
    ASSERT_GE(b.y_min, 0.0);
    ASSERT_LE(b.x_max, 500.0);
    ASSERT_LE(b.y_max, 500.0);
  }
}

TEST(SampleRectangleTest, SmallTerrainClampsToExtent) {
  const Rect2 extent{10, 20, 40, 50};
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const PlacementRect r = SampleRectangle(extent, PlacementParams{}, rng);
    EXPECT_TRUE(r.clamped);
    EXPECT_EQ(r.side_x, 30.0);
    EXPECT_EQ(r.side_y, 30.0);
    EXPECT_EQ(r.center_x, 25.0);
    EXPECT_EQ(r.center_y, 35.0);
  }
}

TEST(InstanceParamsTest, Distribution) {
  const AssetCatalog catalog = BuildCatalog(AssetParams{});
  const PlacementParams params;
  Rng rng(3);
  std::set<int> frames;
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const InstanceParams p = SampleInstanceParams(catalog, params, rng);
    ASSERT_EQ(p.model_id, 0);
    ASSERT_GE(p.scale, 0.4);
    ASSERT_LT(p.scale, 1.0);
    ASSERT_GE(p.yaw_deg, 0.0);
    ASSERT_LT(p.yaw_deg, 360.0);
    frames.insert(p.frame_index);
    sum += p.scale;
  }
  EXPECT_NEAR(sum / n, 0.7, 0.01);
  EXPECT_EQ(frames.size(), 888u);
  EXPECT_EQ(*frames.begin(), 0);
  EXPECT_EQ(*frames.rbegin(), 887);
}

TEST(PlaceZebrasTest, ZeroRequested) {
  Scene scene{FlatTerrain(200, 0), SmallCatalog(), {}};
  Rng rng(4);
  const PlacementOutcome out = PlaceZebras(scene, 0, PlacementParams{}, rng);
  EXPECT_TRUE(out.retained.empty());
  EXPECT_EQ(out.removed, 0);
  EXPECT_TRUE(scene.instances.empty());
}

TEST(PlaceZebrasTest, AnimalsStandOnTerrainInsideRectangle) {
  Scene scene{FlatTerrain(300, 3.0), SmallCatalog(), {}};
  Rng rng(5);
  const PlacementOutcome out = PlaceZebras(scene, 40, PlacementParams{}, rng);
  const Rect2 area = out.rect.Bounds();
  ASSERT_FALSE(out.retained.empty());
  for (const PlacedInstance& inst : out.retained) {
    EXPECT_EQ(inst.position.z, 3.0);
    EXPECT_TRUE(area.Contains(inst.position.x, inst.position.y));
  }
}

TEST(PlaceZebrasTest, CrowdedPlacementLeavesNoOverlaps) {
  Scene scene{FlatTerrain(40, 0.0), SmallCatalog(), {}};
  PlacementParams params;
  params.scale = {1.0, 1.0};
  for (uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed);
    const PlacementOutcome out = PlaceZebras(scene, 250, params, rng);
    EXPECT_EQ(out.requested, 250);
    EXPECT_EQ(static_cast<int>(out.retained.size()) + out.removed, 250);
    EXPECT_GT(out.removed, 0);
    for (size_t i = 0; i < out.retained.size(); ++i) {
      EXPECT_EQ(out.retained[i].instance_id, static_cast<int>(i) + 1);
      for (size_t j = i + 1; j < out.retained.size(); ++j) {
        ASSERT_FALSE(oracle::CornerSat(out.retained[i].world_obb, out.retained[j].world_obb))
            << i << " " << j;
      }
    }
    EXPECT_EQ(scene.instances.size(), out.retained.size());
  }
}

TEST(PlaceZebrasTest, RetriesOnlyHelp) {
  Scene scene{FlatTerrain(40, 0.0), SmallCatalog(), {}};
  PlacementParams params;
  params.scale = {1.0, 1.0};
  Rng a(9);
  const int plain = static_cast<int>(PlaceZebras(scene, 100, params, a).retained.size());
  params.retries = 20;
  Rng b(9);
  const PlacementOutcome more = PlaceZebras(scene, 100, params, b);
  EXPECT_GE(static_cast<int>(more.retained.size()), plain);
  EXPECT_EQ(static_cast<int>(more.retained.size()) + more.removed, 100);
}

TEST(PlaceZebrasTest, SameSeedSameLayout) {
  const auto terrain =
      std::make_shared<const Terrain>(MakeProceduralTerrain(TerrainParams{}, 0));
  const auto catalog = SmallCatalog();
  Scene s1{terrain, catalog, {}}, s2{terrain, catalog, {}};
  Rng r1(11), r2(11);
  const PlacementOutcome a = PlaceZebras(s1, 60, PlacementParams{}, r1);
  const PlacementOutcome b = PlaceZebras(s2, 60, PlacementParams{}, r2);
  ASSERT_EQ(a.retained.size(), b.retained.size());
  EXPECT_EQ(a.rect, b.rect);
  for (size_t i = 0; i < a.retained.size(); ++i) {
    EXPECT_EQ(a.retained[i].position, b.retained[i].position);
    EXPECT_EQ(a.retained[i].world_vertices, b.retained[i].world_vertices);
  }
}

TEST(PlaceZebrasTest, RejectsBadInput) {
  Scene scene{nullptr, SmallCatalog(), {}};
  Rng rng(1);
  EXPECT_THROW(PlaceZebras(scene, 3, PlacementParams{}, rng), InvalidArgument);
  scene.terrain = FlatTerrain(100, 0);
  EXPECT_THROW(PlaceZebras(scene, -1, PlacementParams{}, rng), InvalidArgument);
}

}  // namespace
}  // namespace zebrasynth
