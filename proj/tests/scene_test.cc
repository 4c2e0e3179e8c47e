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
#include "zebrasynth/scene.h"

#include <cmath>
#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "zebrasynth/error.h"

namespace zebrasynth {
namespace {

using oracle::Gen;

Terrain Flat(double h) { return Terrain(-10, -10, 2.0, 11, 11, std::vector<double>(121, h)); }

TEST(TerrainTest, FlatTerrainIsConstant) {
  const Terrain t = Flat(3.25);
  Gen g(21);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(t.Height(g.In(-10, 10), g.In(-10, 10)), 3.25);
}

TEST(TerrainTest, CellCenterAveragesCorners) {
  const Terrain t(0, 0, 1.0, 2, 2, {0, 0, 2, 2});
  EXPECT_DOUBLE_EQ(t.Height(0.5, 0.5), 1.0);
}

TEST(TerrainTest, MatchesDirectBilinearFormula) {
  TerrainParams p;
  p.size_x = 60;
  p.size_y = 40;
  p.cell_size = 1.5;
  const Terrain t = MakeProceduralTerrain(p, 3);
  const Rect2 b = t.GridBounds();
  Gen g(22);
  for (int i = 0; i < 10000; ++i) {
    const double x = g.In(b.x_min, b.x_max), y = g.In(b.y_min, b.y_max);
    EXPECT_NEAR(t.Height(x, y), oracle::BilinearHeight(t, x, y), 1e-12);
  }
}

TEST(TerrainTest, ContinuousAcrossCellBoundaries) {
  const Terrain t = MakeProceduralTerrain(TerrainParams{}, 0);
  for (int i = 1; i + 1 < t.nx(); i += 7) {
    const double x = t.origin_x() + i * t.cell_size();
    const double y = t.origin_y() + 0.37 * t.cell_size() * 11;
    EXPECT_LT(std::abs(t.Height(x - 1e-9, y) - t.Height(x + 1e-9, y)), 1e-6);
    EXPECT_LT(std::abs(t.Height(y, x - 1e-9) - t.Height(y, x + 1e-9)), 1e-6);
  }
}

TEST(TerrainTest, OutsideQueriesAndBadGridsThrow) {
  const Terrain t = Flat(0);
  EXPECT_THROW(t.Height(10.5, 0), InvalidArgument);
  EXPECT_THROW(t.Height(0, -10.01), InvalidArgument);
  EXPECT_THROW(Terrain(0, 0, 1, 1, 2, {0, 0}), InvalidArgument);
  EXPECT_THROW(Terrain(0, 0, 0, 2, 2, {0, 0, 0, 0}), InvalidArgument);
  EXPECT_THROW(Terrain(0, 0, 1, 2, 2, {0, 0, 0}), InvalidArgument);
  EXPECT_THROW(Terrain(0, 0, 1, 2, 2, {0, 0, NAN, 0}), InvalidArgument);
}

TEST(TerrainTest, ProceduralIsDeterministicAndVariesByEnvironment) {
  const TerrainParams p;
  const Terrain a = MakeProceduralTerrain(p, 1);
  const Terrain b = MakeProceduralTerrain(p, 1);
  const Terrain c = MakeProceduralTerrain(p, 2);
  EXPECT_EQ(a.heights(), b.heights());
  EXPECT_NE(a.heights(), c.heights());
  for (double h : a.heights()) ASSERT_TRUE(std::isfinite(h));
}

TEST(TerrainTest, HeightfieldRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "zebrasynth_scene_test";
  std::filesystem::remove_all(dir);
  TerrainParams p;
  p.size_x = 20;
  p.size_y = 30;
  const Terrain t = MakeProceduralTerrain(p, 0);
  SaveHeightfield(t, (dir / "terrain.json").string());
  const Terrain back = LoadHeightfield((dir / "terrain.json").string());
  EXPECT_EQ(back.nx(), t.nx());
  EXPECT_EQ(back.ny(), t.ny());
  EXPECT_EQ(back.origin_x(), t.origin_x());
  for (size_t i = 0; i < t.heights().size(); ++i) {
    EXPECT_EQ(back.heights()[i], static_cast<double>(static_cast<float>(t.heights()[i])));
  }
  EXPECT_THROW(LoadHeightfield((dir / "missing.json").string()), std::exception);
  std::filesystem::remove_all(dir);
}

TEST(QuadrupedTest, SameSeedIsBitIdentical) {
  const AssetModel a = MakeQuadruped(QuadrupedParams{}, 6, 10, 99);
  const AssetModel b = MakeQuadruped(QuadrupedParams{}, 6, 10, 99);
  ASSERT_EQ(a.FrameCount(), b.FrameCount());
  for (int f = 0; f < a.FrameCount(); ++f) {
    EXPECT_EQ(a.frames[f].vertices, b.frames[f].vertices);
    EXPECT_EQ(a.frames[f].joints, b.frames[f].joints);
  }
}

TEST(QuadrupedTest, DefaultCatalogLayout) {
  const std::vector<int> spread = SpreadFrames(34, 888);
  ASSERT_EQ(spread.size(), 34u);
  EXPECT_EQ(std::accumulate(spread.begin(), spread.end(), 0), 888);
  EXPECT_EQ(std::count(spread.begin(), spread.end(), 27), 4);
  EXPECT_EQ(std::count(spread.begin(), spread.end(), 26), 30);

  const AssetCatalog catalog = BuildCatalog(AssetParams{});
  ASSERT_EQ(catalog.models.size(), 1u);
  const AssetModel& m = catalog.models[0];
  EXPECT_EQ(m.sequences.size(), 34u);
  EXPECT_EQ(m.FrameCount(), 888);
}

TEST(QuadrupedTest, SkeletonAndFrameInvariants) {
  const AssetModel m = MakeQuadruped(QuadrupedParams{}, 34, 26, 5);
  EXPECT_EQ(m.sequences.size(), 34u);
  EXPECT_GE(m.joint_names.size(), 12u);
  for (const char* name : {"spine", "head", "tail_base", "front_left_knee", "front_left_hoof",
                           "front_right_hoof", "hind_left_hoof", "hind_right_hoof"}) {
    EXPECT_GE(m.JointIndex(name), 0) << name;
  }
  const size_t nv = m.frames[0].vertices.size();
  for (const AnimationFrame& f : m.frames) {
    ASSERT_EQ(f.vertices.size(), nv);
    ASSERT_EQ(f.joints.size(), m.joint_names.size());
    for (const Vec3& v : f.vertices) ASSERT_TRUE(f.obb.Contains(v, 1e-6));
  }
  for (const Triangle& t : m.triangles) {
    for (int i : t) ASSERT_TRUE(i >= 0 && static_cast<size_t>(i) < nv);
  }
}

TEST(QuadrupedTest, StandingFeetTouchTheGround) {
  const AssetModel m = MakeQuadruped(QuadrupedParams{}, 4, 8, 17);
  ASSERT_EQ(m.sequences[0].kind, GaitKind::kStanding);
  const AnimationFrame& f = m.frames[static_cast<size_t>(m.sequences[0].first_frame)];
  for (const char* hoof : {"front_left_hoof", "front_right_hoof", "hind_left_hoof",
                           "hind_right_hoof"}) {
    EXPECT_NEAR(f.joints[static_cast<size_t>(m.JointIndex(hoof))].z, 0.0, 1e-6) << hoof;
  }
}

TEST(QuadrupedTest, InvalidCountsThrow) {
  EXPECT_THROW(MakeQuadruped(QuadrupedParams{}, 0, 5, 1), InvalidArgument);
  EXPECT_THROW(MakeQuadruped(QuadrupedParams{}, 3, 0, 1), InvalidArgument);
  EXPECT_THROW(SpreadFrames(5, 4), InvalidArgument);
}

TEST(InstanceTest, WorldBoxFollowsTransform) {
  const AssetModel m = MakeQuadruped(QuadrupedParams{}, 4, 5, 3);
  Gen g(23);
  for (int i = 0; i < 200; ++i) {
    const int frame = g.Int(0, m.FrameCount() - 1);
    const double scale = g.In(0.4, 1.0), yaw = g.In(0, 360);
    const Vec3 pos{g.In(-50, 50), g.In(-50, 50), g.In(-3, 3)};
    const PlacedInstance inst = Instantiate(m, frame, scale, yaw, pos, 7);
    const Obb& canonical = m.frames[static_cast<size_t>(frame)].obb;
    EXPECT_NEAR(inst.world_obb.Volume(), canonical.Volume() * scale * scale * scale,
                1e-9 * canonical.Volume());
    ASSERT_EQ(inst.world_vertices.size(), m.frames[0].vertices.size());
    for (size_t k = 0; k < inst.world_vertices.size(); ++k) {
      const Vec3 want =
          ModelToWorld(m.frames[static_cast<size_t>(frame)].vertices[k], scale, yaw, pos);
      EXPECT_NEAR(Norm(inst.world_vertices[k] - want), 0.0, 1e-12);
      EXPECT_TRUE(inst.world_obb.Contains(inst.world_vertices[k], 1e-6));
    }
    EXPECT_EQ(inst.instance_id, 7);
  }
}

TEST(CatalogTest, DistinctVariantsDiffer) {
  AssetParams p;
  p.sequences = 4;
  p.total_frames = 8;
  p.distinct_models = 3;
  const AssetCatalog c = BuildCatalog(p);
  ASSERT_EQ(c.models.size(), 3u);
  EXPECT_NE(c.models[0].frames[0].vertices, c.models[1].frames[0].vertices);
  for (size_t i = 0; i < c.models.size(); ++i) EXPECT_EQ(c.models[i].id, static_cast<int>(i));
}

}  // namespace
}  // namespace zebrasynth
