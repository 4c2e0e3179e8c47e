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

#include <algorithm>

#include "zebrasynth/error.h"

namespace zebrasynth {

PlacementRect SampleRectangle(const Rect2& extent, const PlacementParams& params,
                              Rng& rng) {
  PlacementRect r;
  const double sx = rng.Uniform(params.rect_side.lo, params.rect_side.hi);
  const double sy = rng.Uniform(params.rect_side.lo, params.rect_side.hi);
  r.side_x = std::min(sx, extent.Width());
  r.side_y = std::min(sy, extent.Height());
  r.clamped = r.side_x < sx || r.side_y < sy;
  r.center_x = rng.Uniform(extent.x_min + r.side_x / 2, extent.x_max - r.side_x / 2);
  r.center_y = rng.Uniform(extent.y_min + r.side_y / 2, extent.y_max - r.side_y / 2);
  return r;
}

InstanceParams SampleInstanceParams(const AssetCatalog& catalog,
                                    const PlacementParams& params, Rng& rng) {
  if (catalog.models.empty()) throw InvalidArgument("empty asset catalog");
  InstanceParams p;
  p.model_id = static_cast<int>(
      rng.UniformInt(0, static_cast<int64_t>(catalog.models.size()) - 1));
  const AssetModel& model = catalog.Model(p.model_id);
  p.frame_index = static_cast<int>(rng.UniformInt(0, model.FrameCount() - 1));
  p.scale = rng.Uniform(params.scale.lo, params.scale.hi);
  p.yaw_deg = rng.Uniform(0.0, 360.0);
  return p;
}

namespace {

bool AabbOverlap(const std::array<Vec3, 2>& a, const std::array<Vec3, 2>& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[1][i] < b[0][i] || b[1][i] < a[0][i]) return false;
  }
  return true;
}

}  // namespace

PlacementOutcome PlaceZebras(Scene& scene, int n_requested,
                             const PlacementParams& params, Rng& rng) {
  if (!scene.terrain || !scene.catalog) {
    throw InvalidArgument("PlaceZebras: scene needs terrain and catalog");
  }
  if (n_requested < 0) throw InvalidArgument("PlaceZebras: negative count");
  const Terrain& terrain = *scene.terrain;

  PlacementOutcome out;
  out.requested = n_requested;
  out.rect = SampleRectangle(terrain, params, rng);
  const Rect2 area = out.rect.Bounds();

  std::vector<std::array<Vec3, 2>> bounds;
  for (int k = 0; k < n_requested; ++k) {
    const InstanceParams ip = SampleInstanceParams(*scene.catalog, params, rng);
    const AssetModel& model = scene.catalog->Model(ip.model_id);
    const Obb& canonical = model.frames[static_cast<size_t>(ip.frame_index)].obb;
    bool placed = false;
    for (int attempt = 0; attempt <= params.retries && !placed; ++attempt) {
      const double x = rng.Uniform(area.x_min, area.x_max);
      const double y = rng.Uniform(area.y_min, area.y_max);
      const Vec3 pos{x, y, terrain.Height(x, y)};
      const Obb box = TransformObb(canonical, ip.scale, ip.yaw_deg, pos);
      const auto aabb = box.Aabb();
      bool hit = false;
      for (size_t i = 0; i < out.retained.size() && !hit; ++i) {
        hit = AabbOverlap(aabb, bounds[i]) &&
              ObbIntersects(box, out.retained[i].world_obb);
      }
      if (hit) continue;
      out.retained.push_back(Instantiate(model, ip.frame_index, ip.scale,
                                         ip.yaw_deg, pos,
                                         static_cast<int>(out.retained.size()) + 1));
      bounds.push_back(aabb);
      placed = true;
    }
    if (!placed) ++out.removed;
  }
  scene.instances = out.retained;
  return out;
}

}  // namespace zebrasynth
