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
//
// Terrain heightfield, the procedural quadruped asset and placed instances.
#ifndef ZEBRASYNTH_SCENE_H_
#define ZEBRASYNTH_SCENE_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "zebrasynth/geometry.h"

namespace zebrasynth {

struct Rect2 {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double Width() const { return x_max - x_min; }
  double Height() const { return y_max - y_min; }
  bool Contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  bool operator==(const Rect2&) const = default;
};

using Triangle = std::array<int, 3>;

// Regular-grid heightfield. Sample (i, j) sits at
// (origin_x + i * cell_size, origin_y + j * cell_size); heights are row-major
// with j as the row.
class Terrain {
 public:
  Terrain(double origin_x, double origin_y, double cell_size, int nx, int ny,
          std::vector<double> heights);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_size() const { return cell_size_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  double At(int i, int j) const { return heights_[static_cast<size_t>(j) * nx_ + i]; }
  const std::vector<double>& heights() const { return heights_; }

  // Full grid bounds.
  Rect2 GridBounds() const;
  // Region available for placement; defaults to the grid bounds.
  const Rect2& extent() const { return extent_; }
  void set_extent(const Rect2& r);

  // Bilinear interpolation. Throws InvalidArgument outside the grid bounds.
  double Height(double x, double y) const;

  Vec3 Vertex(int i, int j) const {
    return {origin_x_ + i * cell_size_, origin_y_ + j * cell_size_, At(i, j)};
  }
  // Two triangles per cell over the vertex grid indexed j * nx + i.
  std::vector<Vec3> MeshVertices() const;
  std::vector<Triangle> MeshTriangles() const;

 private:
  double origin_x_;
  double origin_y_;
  double cell_size_;
  int nx_;
  int ny_;
  std::vector<double> heights_;
  Rect2 extent_;
};

inline double TerrainHeight(const Terrain& t, double x, double y) {
  return t.Height(x, y);
}

struct TerrainParams {
  double size_x = 400.0;
  double size_y = 400.0;
  double cell_size = 2.0;
  double amplitude = 4.0;    // Peak relief, meters.
  double wavelength = 90.0;  // Dominant feature size, meters.
  uint64_t seed = 7;
  // Optional sidecar JSON of an imported float32 raster; overrides the
  // procedural parameters above when nonempty.
  std::string heightfield;

  bool operator==(const TerrainParams&) const = default;
};

// Smooth rolling relief from a few seeded sinusoid octaves. Environment
// `env_index` perturbs the seed so environments differ.
Terrain MakeProceduralTerrain(const TerrainParams& p, int env_index);

// Imports a little-endian float32 raster described by a JSON sidecar:
//   {"width": nx, "height": ny, "cell_size": c, "origin": [x, y],
//    "data": "relative/or/absolute.f32"}
Terrain LoadHeightfield(const std::string& sidecar_path);
void SaveHeightfield(const Terrain& t, const std::string& sidecar_path);

// ---------------------------------------------------------------------------
// Assets

enum class GaitKind { kStanding, kGrazing, kWalking, kTrotting };
const char* GaitName(GaitKind kind);

struct QuadrupedParams {
  double torso_length = 1.30;  // Shoulder to hip, meters.
  double hip_height = 0.80;    // Leg attachment height at rest.
  double thigh_length = 0.48;
  double shin_length = 0.46;
  double torso_half_width = 0.22;
  double torso_half_height = 0.28;
  double neck_length = 0.70;
  double head_length = 0.50;
  double tail_length = 0.55;

  bool operator==(const QuadrupedParams&) const = default;
};

struct AnimationFrame {
  std::vector<Vec3> vertices;  // Model frame: x forward, z up, ground at 0.
  std::vector<Vec3> joints;    // Parallel to AssetModel::joint_names.
  Obb obb;
};

struct AnimationSequence {
  std::string name;
  GaitKind kind = GaitKind::kStanding;
  int first_frame = 0;
  int frame_count = 0;
};

struct AssetModel {
  int id = 0;
  std::vector<std::string> joint_names;
  std::vector<Triangle> triangles;  // Shared by every frame.
  std::vector<AnimationSequence> sequences;
  std::vector<AnimationFrame> frames;  // Sequences laid out back to back.

  int FrameCount() const { return static_cast<int>(frames.size()); }
  int JointIndex(const std::string& name) const;  // -1 when absent.
};

// Deterministic articulated low-poly quadruped. Sequence k gets gait kind
// k % 4 (standing, grazing, walking, trotting) with seeded parameters.
AssetModel MakeQuadruped(const QuadrupedParams& params,
                         std::span<const int> frames_per_sequence,
                         uint64_t seed, int model_id = 0);
AssetModel MakeQuadruped(const QuadrupedParams& params, int n_sequences,
                         int frames_per_sequence, uint64_t seed,
                         int model_id = 0);

// Splits `total_frames` across `n_sequences` as evenly as possible, longer
// sequences first (34 sequences / 888 frames -> 4 x 27 + 30 x 26).
std::vector<int> SpreadFrames(int n_sequences, int total_frames);

struct AssetParams {
  int sequences = 34;
  int total_frames = 888;
  // Number of distinct body variants in the catalog. 1 means every placed
  // animal is a clone of the same model.
  int distinct_models = 1;
  double variant_spread = 0.10;  // Relative body-proportion jitter per variant.
  uint64_t seed = 1;
  QuadrupedParams body;

  bool operator==(const AssetParams&) const = default;
};

struct AssetCatalog {
  std::vector<AssetModel> models;

  const AssetModel& Model(int id) const { return models.at(static_cast<size_t>(id)); }
};

AssetCatalog BuildCatalog(const AssetParams& p);

// ---------------------------------------------------------------------------
// Instances

struct PlacedInstance {
  int instance_id = 0;  // 1-based; 0 is reserved for background.
  int model_id = 0;
  int frame_index = 0;
  double scale = 1.0;
  double yaw_deg = 0.0;
  Vec3 position;  // Ground contact point of the model origin.
  Obb world_obb;
  std::vector<Vec3> world_joints;
  std::vector<Vec3> world_vertices;
};

// Model-to-world: p_world = position + Rz(yaw) * (scale * p_model).
Vec3 ModelToWorld(const Vec3& p, double scale, double yaw_deg,
                  const Vec3& position);
Obb TransformObb(const Obb& box, double scale, double yaw_deg,
                 const Vec3& position);

// Instantiates one animation frame of `model` in the world.
PlacedInstance Instantiate(const AssetModel& model, int frame_index,
                           double scale, double yaw_deg, const Vec3& position,
                           int instance_id);

// Terrain, assets and the instances currently placed. Only the generation
// coordinator mutates `instances`, between snapshots.
struct Scene {
  std::shared_ptr<const Terrain> terrain;
  std::shared_ptr<const AssetCatalog> catalog;
  std::vector<PlacedInstance> instances;
};

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_SCENE_H_
