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
#include "zebrasynth/capture.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zebrasynth/error.h"

namespace zebrasynth {

using nlohmann::json;

TimeOfDay SampleTimeOfDay(const TimeParams& params, Rng& rng) {
  const double lo = params.day_window.lo, hi = params.day_window.hi;
  if (rng.Bernoulli(params.day_probability)) return {rng.Uniform(lo, hi)};
  const double u = rng.Uniform(0.0, 24.0 - (hi - lo));
  return {u < lo ? u : u + (hi - lo)};
}

double SunElevationDeg(const TimeOfDay& t) {
  return std::clamp(90.0 * std::sin(kPi * (t.hour - 6.0) / 12.0), -90.0, 90.0);
}

double SunAzimuthDeg(const TimeOfDay& t) { return 90.0 + 15.0 * (t.hour - 6.0); }

Vec3 SunDirection(const TimeOfDay& t) {
  const double el = DegToRad(SunElevationDeg(t));
  const double az = DegToRad(SunAzimuthDeg(t));
  return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

Vec3 ComputePivot(std::span<const PlacedInstance> instances) {
  if (instances.empty()) throw InvalidArgument("ComputePivot: no instances");
  Vec3 sum;
  for (const PlacedInstance& inst : instances) sum += inst.position;
  return sum / static_cast<double>(instances.size());
}

CameraPose AimCamera(const Vec3& pivot, const Vec3& position, double roll_deg,
                     double yaw_jitter_deg, Strategy strategy,
                     double pitch_offset_deg) {
  CameraPose pose;
  pose.position = position;
  pose.roll_deg = roll_deg;
  pose.pitch_deg = PitchToward(pivot, position, pitch_offset_deg);
  pose.yaw_deg = BearingDeg(position, pivot) + yaw_jitter_deg;
  pose.strategy = strategy;
  return pose;
}

CameraPose SampleCameraFar(const Vec3& pivot, const CameraParams& params, Rng& rng) {
  const double dx = rng.Uniform(params.planar_offset.lo, params.planar_offset.hi);
  const double dy = rng.Uniform(params.planar_offset.lo, params.planar_offset.hi);
  const double dz = rng.Uniform(params.height_offset.lo, params.height_offset.hi);
  const double roll = rng.Uniform(params.roll.lo, params.roll.hi);
  const double jitter = rng.Uniform(params.yaw_jitter_far.lo, params.yaw_jitter_far.hi);
  return AimCamera(pivot, pivot + Vec3{dx, dy, dz}, roll, jitter, Strategy::kFar,
                   params.pitch_offset);
}

namespace {

CameraPose SampleNearFromBox(const Rect2& box, const Vec3& pivot,
                             const CameraParams& params, Rng& rng) {
  const double m = params.near_margin;
  const double x = rng.Uniform(box.x_min - m, box.x_max + m);
  const double y = rng.Uniform(box.y_min - m, box.y_max + m);
  const double dz = rng.Uniform(params.height_offset.lo, params.height_offset.hi);
  const double roll = rng.Uniform(params.roll.lo, params.roll.hi);
  const double jitter =
      rng.Uniform(params.yaw_jitter_near.lo, params.yaw_jitter_near.hi);
  return AimCamera(pivot, {x, y, pivot.z + dz}, roll, jitter, Strategy::kNear,
                   params.pitch_offset);
}

Rect2 HerdBox(std::span<const PlacedInstance> instances) {
  Rect2 box{instances[0].position.x, instances[0].position.y,
            instances[0].position.x, instances[0].position.y};
  for (const PlacedInstance& inst : instances) {
    box.x_min = std::min(box.x_min, inst.position.x);
    box.y_min = std::min(box.y_min, inst.position.y);
    box.x_max = std::max(box.x_max, inst.position.x);
    box.y_max = std::max(box.y_max, inst.position.y);
  }
  return box;
}

}  // namespace

CameraPose SampleCameraNear(std::span<const PlacedInstance> instances,
                            const CameraParams& params, Rng& rng) {
  if (instances.empty()) throw InvalidArgument("SampleCameraNear: no instances");
  return SampleNearFromBox(HerdBox(instances), ComputePivot(instances), params, rng);
}

CameraPose SampleCamera(Strategy strategy, std::span<const PlacedInstance> instances,
                        const CameraParams& params, Rng& rng) {
  return strategy == Strategy::kFar
             ? SampleCameraFar(ComputePivot(instances), params, rng)
             : SampleCameraNear(instances, params, rng);
}

CameraModel MakeCameraModel(const CameraPose& pose, const CameraParams& params) {
  return CameraModel(pose.position, pose.Orientation(), params.width,
                     params.height, params.fov_deg);
}

// ---------------------------------------------------------------------------

Environment BuildEnvironment(const SceneConfig& config, int env_index,
                             std::shared_ptr<const AssetCatalog> catalog) {
  Environment env;
  env.index = env_index;
  env.terrain = std::make_shared<const Terrain>(
      config.terrain.heightfield.empty()
          ? MakeProceduralTerrain(config.terrain, env_index)
          : LoadHeightfield(config.terrain.heightfield));
  env.catalog = catalog ? std::move(catalog)
                        : std::make_shared<const AssetCatalog>(BuildCatalog(config.asset));
  return env;
}

std::string FrameRecord::Name() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "e%02d_%s_p%03d_t%d_c%d", environment,
                StrategyName(strategy), placement, randomization, camera);
  return buf;
}

GenerationRun RunEnvironment(const SceneConfig& config, const Environment& env,
                             Strategy strategy, uint64_t seed,
                             const SnapshotCallback& on_snapshot) {
  const GenerationParams& g = config.generation;
  GenerationRun run;
  run.environment = env.index;
  run.strategy = strategy;
  run.placements = g.placements;
  run.time_randomizations = g.time_randomizations;
  run.cameras = g.cameras;
  run.frames.reserve(static_cast<size_t>(g.placements) * g.time_randomizations * g.cameras);

  const uint64_t e = static_cast<uint64_t>(env.index);
  const uint64_t s = static_cast<uint64_t>(strategy);
  Scene scene{env.terrain, env.catalog, {}};
  for (int p = 0; p < g.placements; ++p) {
    const uint64_t pu = static_cast<uint64_t>(p);
    Rng count_rng = StreamRng(seed, "count", {e, s, pu});
    const int n = static_cast<int>(
        count_rng.UniformInt(config.placement.count.lo, config.placement.count.hi));
    Rng place_rng = StreamRng(seed, "placement", {e, s, pu});
    const PlacementOutcome outcome = PlaceZebras(scene, n, config.placement, place_rng);
    run.placement_records.push_back({p, n, static_cast<int>(outcome.retained.size()),
                                     outcome.removed, outcome.rect});

    // With nothing placed the cameras aim at the rectangle center.
    Vec3 pivot;
    Rect2 herd;
    if (scene.instances.empty()) {
      const double cx = outcome.rect.center_x, cy = outcome.rect.center_y;
      pivot = {cx, cy, env.terrain->Height(cx, cy)};
      herd = {cx, cy, cx, cy};
    } else {
      pivot = ComputePivot(scene.instances);
      herd = HerdBox(scene.instances);
    }

    for (int t = 0; t < g.time_randomizations; ++t) {
      const uint64_t tu = static_cast<uint64_t>(t);
      Rng time_rng = StreamRng(seed, "time", {e, s, pu, tu});
      const TimeOfDay tod = SampleTimeOfDay(config.time, time_rng);
      const size_t first = run.frames.size();
      for (int c = 0; c < g.cameras; ++c) {
        Rng cam_rng = StreamRng(seed, "camera", {e, s, pu, tu, static_cast<uint64_t>(c)});
        FrameRecord f;
        f.index = static_cast<int>(run.frames.size());
        f.environment = env.index;
        f.strategy = strategy;
        f.placement = p;
        f.randomization = t;
        f.camera = c;
        f.pose = strategy == Strategy::kFar
                     ? SampleCameraFar(pivot, config.camera, cam_rng)
                     : SampleNearFromBox(herd, pivot, config.camera, cam_rng);
        f.time = tod;
        f.pivot = pivot;
        f.instance_count = static_cast<int>(scene.instances.size());
        run.frames.push_back(f);
      }
      if (on_snapshot) {
        on_snapshot(scene, std::span<const FrameRecord>(run.frames).subspan(first));
      }
    }
  }
  return run;
}

std::vector<GenerationRun> RunGeneration(const SceneConfig& config, uint64_t seed) {
  ValidateConfig(config);
  const auto catalog = std::make_shared<const AssetCatalog>(BuildCatalog(config.asset));
  std::vector<GenerationRun> runs;
  for (int e = 0; e < config.generation.environments; ++e) {
    const Environment env = BuildEnvironment(config, e, catalog);
    for (Strategy s : config.generation.strategies) {
      runs.push_back(RunEnvironment(config, env, s, seed));
    }
  }
  return runs;
}

// ---------------------------------------------------------------------------

json PoseToJson(const CameraPose& pose) {
  return {{"position", {pose.position.x, pose.position.y, pose.position.z}},
          {"roll_deg", pose.roll_deg},
          {"pitch_deg", pose.pitch_deg},
          {"yaw_deg", pose.yaw_deg},
          {"strategy", StrategyName(pose.strategy)}};
}

json FrameToJson(const FrameRecord& f) {
  return {{"index", f.index},
          {"name", f.Name()},
          {"environment", f.environment},
          {"strategy", StrategyName(f.strategy)},
          {"placement", f.placement},
          {"randomization", f.randomization},
          {"camera", f.camera},
          {"pose", PoseToJson(f.pose)},
          {"hour", f.time.hour},
          {"pivot", {f.pivot.x, f.pivot.y, f.pivot.z}},
          {"instance_count", f.instance_count}};
}

json RunToJson(const GenerationRun& run) {
  json placements = json::array();
  for (const PlacementRecord& p : run.placement_records) {
    placements.push_back({{"placement", p.placement},
                          {"requested", p.requested},
                          {"retained", p.retained},
                          {"removed", p.removed},
                          {"rect",
                           {{"center", {p.rect.center_x, p.rect.center_y}},
                            {"side", {p.rect.side_x, p.rect.side_y}},
                            {"clamped", p.rect.clamped}}}});
  }
  json frames = json::array();
  for (const FrameRecord& f : run.frames) frames.push_back(FrameToJson(f));
  return {{"environment", run.environment},
          {"strategy", StrategyName(run.strategy)},
          {"placements", run.placements},
          {"time_randomizations", run.time_randomizations},
          {"cameras", run.cameras},
          {"placement_records", placements},
          {"frames", frames}};
}

}  // namespace zebrasynth
