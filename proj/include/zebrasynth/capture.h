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
// Camera pose sampling, time of day and the snapshot generation loop.
//
// For each environment and strategy the loop places the herd P times; after
// each placement it draws T (time of day, camera set) randomizations of C
// cameras each, so a run emits P * T * C frames.
#ifndef ZEBRASYNTH_CAPTURE_H_
#define ZEBRASYNTH_CAPTURE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "zebrasynth/config.h"
#include "zebrasynth/geometry.h"
#include "zebrasynth/placement.h"
#include "zebrasynth/random.h"
#include "zebrasynth/scene.h"

namespace zebrasynth {

struct TimeOfDay {
  double hour = 12.0;  // [0, 24)

  bool operator==(const TimeOfDay&) const = default;
};

// With probability day_probability uniform on day_window, otherwise uniform
// on the rest of [0, 24).
TimeOfDay SampleTimeOfDay(const TimeParams& params, Rng& rng);

// Toy solar arc: elevation 90 * sin(pi * (hour - 6) / 12) degrees, compass
// azimuth 90 + 15 * (hour - 6) (east at 6h, south at noon, west at 18h).
double SunElevationDeg(const TimeOfDay& t);
double SunAzimuthDeg(const TimeOfDay& t);
// Unit vector toward the sun; x east, y north, z up.
Vec3 SunDirection(const TimeOfDay& t);

// Mean position. Throws InvalidArgument when empty.
Vec3 ComputePivot(std::span<const PlacedInstance> instances);

struct CameraPose {
  Vec3 position;
  double roll_deg = 0.0;
  double pitch_deg = 0.0;
  double yaw_deg = 0.0;  // Bearing to pivot plus jitter (not wrapped).
  Strategy strategy = Strategy::kFar;

  Rotation Orientation() const {
    return Rotation::FromRollPitchYaw(roll_deg, pitch_deg, yaw_deg);
  }
  bool operator==(const CameraPose&) const = default;
};

// Pose at `position` aimed at `pivot`: pitch from PitchToward, yaw = bearing
// to the pivot + yaw_jitter.
CameraPose AimCamera(const Vec3& pivot, const Vec3& position, double roll_deg,
                     double yaw_jitter_deg, Strategy strategy,
                     double pitch_offset_deg = 15.0);

// x/y offsets from the pivot in planar_offset, height above it in
// height_offset, roll in roll, yaw jitter in yaw_jitter_far.
CameraPose SampleCameraFar(const Vec3& pivot, const CameraParams& params, Rng& rng);

// x/y inside the herd's x-y bounding box grown by near_margin; otherwise as
// the far strategy with yaw_jitter_near. Throws InvalidArgument when empty.
CameraPose SampleCameraNear(std::span<const PlacedInstance> instances,
                            const CameraParams& params, Rng& rng);

CameraPose SampleCamera(Strategy strategy, std::span<const PlacedInstance> instances,
                        const CameraParams& params, Rng& rng);

CameraModel MakeCameraModel(const CameraPose& pose, const CameraParams& params);

// ---------------------------------------------------------------------------
// Generation loop

struct Environment {
  int index = 0;
  std::shared_ptr<const Terrain> terrain;
  std::shared_ptr<const AssetCatalog> catalog;
};

// `catalog` may be shared between environments; pass null to build one.
Environment BuildEnvironment(const SceneConfig& config, int env_index,
                             std::shared_ptr<const AssetCatalog> catalog = nullptr);

struct FrameRecord {
  int index = 0;  // Position within its run.
  int environment = 0;
  Strategy strategy = Strategy::kFar;
  int placement = 0;
  int randomization = 0;
  int camera = 0;
  CameraPose pose;
  TimeOfDay time;
  Vec3 pivot;
  int instance_count = 0;

  // e.g. "e00_far_p007_t1_c2".
  std::string Name() const;
};

struct PlacementRecord {
  int placement = 0;
  int requested = 0;
  int retained = 0;
  int removed = 0;
  PlacementRect rect;
};

struct GenerationRun {
  int environment = 0;
  Strategy strategy = Strategy::kFar;
  int placements = 0;
  int time_randomizations = 0;
  int cameras = 0;
  std::vector<PlacementRecord> placement_records;
  std::vector<FrameRecord> frames;
};

// Called once per (placement, randomization) with the C frames that share
// the scene state.
using SnapshotCallback =
    std::function<void(const Scene& scene, std::span<const FrameRecord> frames)>;

GenerationRun RunEnvironment(const SceneConfig& config, const Environment& env,
                             Strategy strategy, uint64_t seed,
                             const SnapshotCallback& on_snapshot = nullptr);

// Every environment x strategy of the config, without rendering.
std::vector<GenerationRun> RunGeneration(const SceneConfig& config, uint64_t seed);

nlohmann::json PoseToJson(const CameraPose& pose);
nlohmann::json FrameToJson(const FrameRecord& f);
nlohmann::json RunToJson(const GenerationRun& run);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_CAPTURE_H_
