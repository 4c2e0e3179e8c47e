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
// Generation config. Every field has a default, so `{}` is a complete config;
// the schema is documented in docs/config.md.
#ifndef ZEBRASYNTH_CONFIG_H_
#define ZEBRASYNTH_CONFIG_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zebrasynth/scene.h"

namespace zebrasynth {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool Contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const Range&) const = default;
};

struct IntRange {
  int lo = 0;
  int hi = 0;

  bool operator==(const IntRange&) const = default;
};

enum class Strategy { kFar, kNear };
const char* StrategyName(Strategy s);
// Throws InvalidArgument for anything but "far" / "near".
Strategy ParseStrategy(const std::string& name);

struct PlacementParams {
  Range rect_side{40.0, 120.0};
  Range scale{0.4, 1.0};
  IntRange count{2, 250};
  // Extra attempts for a colliding animal before it is removed.
  int retries = 0;

  bool operator==(const PlacementParams&) const = default;
};

struct CameraParams {
  Range height_offset{5.0, 20.0};
  Range planar_offset{-100.0, 100.0};  // Far strategy, per axis, from pivot.
  Range roll{-10.0, 10.0};
  Range yaw_jitter_far{-30.0, 30.0};
  Range yaw_jitter_near{-15.0, 15.0};
  double near_margin = 5.0;   // Expansion of the herd's x-y box (near).
  double pitch_offset = 15.0;
  int width = 1920;
  int height = 1080;
  double fov_deg = 90.0;

  bool operator==(const CameraParams&) const = default;
};

struct TimeParams {
  Range day_window{5.0, 20.0};
  double day_probability = 0.9;

  bool operator==(const TimeParams&) const = default;
};

struct GenerationParams {
  int environments = 10;
  int placements = 200;           // P
  int time_randomizations = 3;    // T
  int cameras = 3;                // C
  std::vector<Strategy> strategies{Strategy::kFar, Strategy::kNear};

  bool operator==(const GenerationParams&) const = default;
};

struct GroundTruthParams {
  int min_pixels = 9;
  double joint_depth_tolerance = 0.10;
  double near_clip = 0.05;

  bool operator==(const GroundTruthParams&) const = default;
};

struct SceneConfig {
  TerrainParams terrain;
  AssetParams asset;
  PlacementParams placement;
  CameraParams camera;
  TimeParams time;
  GenerationParams generation;
  GroundTruthParams groundtruth;

  bool operator==(const SceneConfig&) const = default;
};

// Throws DataError naming the offending field path.
void ValidateConfig(const SceneConfig& c);

// Absent fields keep their defaults; unknown keys are rejected.
SceneConfig ConfigFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const SceneConfig& c);

// Throws IoError (unreadable) or DataError (malformed / invalid).
SceneConfig LoadSceneConfig(const std::string& path);
void SaveSceneConfig(const SceneConfig& c, const std::string& path);

// SHA-256 of the canonical JSON form.
std::string ConfigDigest(const SceneConfig& c);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_CONFIG_H_
