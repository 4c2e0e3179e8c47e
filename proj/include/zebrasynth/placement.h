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
// Per-snapshot animal placement: pick a rectangle of the terrain, then place
// animals one after the other, removing any whose box collides with one
// already placed.
#ifndef ZEBRASYNTH_PLACEMENT_H_
#define ZEBRASYNTH_PLACEMENT_H_

#include <vector>

#include "zebrasynth/config.h"
#include "zebrasynth/random.h"
#include "zebrasynth/scene.h"

namespace zebrasynth {

struct PlacementRect {
  double center_x = 0.0;
  double center_y = 0.0;
  double side_x = 0.0;
  double side_y = 0.0;
  bool clamped = false;  // A sampled side exceeded the terrain extent.

  Rect2 Bounds() const {
    return {center_x - side_x / 2, center_y - side_y / 2, center_x + side_x / 2,
            center_y + side_y / 2};
  }
  bool operator==(const PlacementRect&) const = default;
};

// Sides uniform in params.rect_side, each clamped to the extent; the center
// is uniform over positions that keep the rectangle inside `extent`.
PlacementRect SampleRectangle(const Rect2& extent, const PlacementParams& params,
                              Rng& rng);
inline PlacementRect SampleRectangle(const Terrain& terrain,
                                     const PlacementParams& params, Rng& rng) {
  return SampleRectangle(terrain.extent(), params, rng);
}

struct InstanceParams {
  int model_id = 0;
  int frame_index = 0;
  double scale = 1.0;
  double yaw_deg = 0.0;

  bool operator==(const InstanceParams&) const = default;
};

// Model uniform over the catalog, frame uniform over that model's frames,
// scale uniform in params.scale, yaw uniform in [0, 360).
InstanceParams SampleInstanceParams(const AssetCatalog& catalog,
                                    const PlacementParams& params, Rng& rng);

struct PlacementOutcome {
  std::vector<PlacedInstance> retained;
  int requested = 0;
  int removed = 0;
  PlacementRect rect;
};

// Places `n_requested` animals in a fresh rectangle and replaces
// scene.instances with the survivors. Retained instance ids are 1..k in
// placement order. Animals stand upright (yaw only) with their origin on the
// terrain surface.
PlacementOutcome PlaceZebras(Scene& scene, int n_requested,
                             const PlacementParams& params, Rng& rng);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_PLACEMENT_H_
