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
// Z-buffered triangle rasterizer writing depth and instance ids.
//
// Pixel (x, y) covers [x, x + 1) x [y, y + 1) and is sampled at its center.
// Shared edges follow a top-left style tie rule so a closed mesh never
// leaves holes or double-covers a pixel. Depth is the optical-axis distance,
// interpolated perspective-correctly.
#ifndef ZEBRASYNTH_RASTER_H_
#define ZEBRASYNTH_RASTER_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "zebrasynth/geometry.h"
#include "zebrasynth/scene.h"

namespace zebrasynth {

template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill)
      : width_(width),
        height_(height),
        data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return data_.size(); }

  T& At(int x, int y) { return data_[Index(x, y)]; }
  const T& At(int x, int y) const { return data_[Index(x, y)]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& mutable_data() { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  size_t Index(int x, int y) const {
    return static_cast<size_t>(y) * static_cast<size_t>(width_) + static_cast<size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

inline constexpr double kBackgroundDepth = std::numeric_limits<double>::infinity();

// Meters along the optical axis; kBackgroundDepth where nothing was drawn.
using DepthMap = Grid<double>;
// 0 = background or terrain.
using InstanceMap = Grid<int32_t>;

class Rasterizer {
 public:
  // With keep_normals, the world-space face normal of the winning triangle
  // is recorded per pixel (zero where nothing was drawn).
  Rasterizer(const CameraModel& camera, double near_clip = 0.05,
             bool keep_normals = false);

  // World-space triangle. Later draws win only when strictly nearer.
  void DrawTriangle(const Vec3& a, const Vec3& b, const Vec3& c, int32_t id);
  void DrawMesh(std::span<const Vec3> vertices, std::span<const Triangle> triangles,
                int32_t id);
  // Terrain writes depth with id 0.
  void DrawTerrain(const Terrain& terrain);
  void DrawInstance(const PlacedInstance& instance, const AssetCatalog& catalog);

  const CameraModel& camera() const { return camera_; }
  const DepthMap& depth() const { return depth_; }
  const InstanceMap& ids() const { return ids_; }
  const Grid<Vec3>& normals() const { return normals_; }

  DepthMap TakeDepth() { return std::move(depth_); }
  InstanceMap TakeIds() { return std::move(ids_); }

 private:
  // Camera-space triangle (x forward); `normal` is for the normal buffer.
  void DrawCameraTriangle(const Vec3& a, const Vec3& b, const Vec3& c, int32_t id,
                          const Vec3& normal);
  void FillProjected(const double (&u)[3], const double (&v)[3],
                     const double (&w)[3], int32_t id, const Vec3& normal);

  CameraModel camera_;
  double near_clip_;
  bool keep_normals_;
  DepthMap depth_;
  InstanceMap ids_;
  Grid<Vec3> normals_;
};

struct RasterOutput {
  DepthMap depth;
  InstanceMap ids;
};

// Terrain (may be null) first, then instances in order.
RasterOutput Rasterize(std::span<const PlacedInstance> instances,
                       const AssetCatalog& catalog, const Terrain* terrain,
                       const CameraModel& camera, double near_clip = 0.05);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_RASTER_H_
