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
// Per-frame ground truth: depth, instance map, modal 2D boxes, world OBBs,
// projected joints and vertices, plus the on-disk layout of a frame.
#ifndef ZEBRASYNTH_GROUNDTRUTH_H_
#define ZEBRASYNTH_GROUNDTRUTH_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zebrasynth/capture.h"
#include "zebrasynth/config.h"
#include "zebrasynth/geometry.h"
#include "zebrasynth/image_io.h"
#include "zebrasynth/raster.h"
#include "zebrasynth/scene.h"

namespace zebrasynth {

// Pixel box, inclusive-exclusive: covers columns [x_min, x_max).
struct Box2D {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;
  int instance_id = 0;
  int pixel_count = 0;

  int Width() const { return x_max - x_min; }
  int Height() const { return y_max - y_min; }
  bool operator==(const Box2D&) const = default;
};

// Tight box over the pixels carrying `instance_id`; empty below min_pixels.
std::optional<Box2D> ComputeBox2D(const InstanceMap& ids, int instance_id,
                                  int min_pixels);
// Boxes of every nonzero id with at least min_pixels pixels, sorted by id.
std::vector<Box2D> ComputeBoxes(const InstanceMap& ids, int min_pixels);

struct JointGroundTruth {
  Vec3 world;
  bool in_front = false;  // Ahead of the camera plane.
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
  bool in_image = false;
  // In the image and not hidden by another surface: its pixel belongs to the
  // same instance or its depth is within the tolerance of the depth map.
  bool visible = false;
};

JointGroundTruth ProjectJoint(const Vec3& world, int instance_id,
                              const CameraModel& camera, const DepthMap& depth,
                              const InstanceMap& ids, double depth_tolerance);

struct InstanceGroundTruth {
  int instance_id = 0;
  int model_id = 0;
  int frame_index = 0;
  double scale = 1.0;
  double yaw_deg = 0.0;
  Vec3 position;
  Obb world_obb;
  int visible_pixels = 0;
  std::vector<JointGroundTruth> joints;
  std::vector<Vec3> world_vertices;
  // u, v, depth per vertex; NaN for vertices behind the camera plane.
  std::vector<Projection> projected_vertices;
};

struct FrameGroundTruth {
  explicit FrameGroundTruth(const CameraModel& cam) : camera(cam) {}

  CameraModel camera;
  std::string name;
  CameraPose pose;
  TimeOfDay time;
  DepthMap depth;
  InstanceMap ids;
  std::vector<Box2D> boxes;
  std::vector<InstanceGroundTruth> instances;
  std::vector<std::string> joint_names;
};

FrameGroundTruth ComputeFrameGroundTruth(const Scene& scene, const CameraModel& camera,
                                         const TimeOfDay& time,
                                         const GroundTruthParams& params);
// Camera built from the frame's pose and `camera_params`; copies name and pose.
FrameGroundTruth ComputeFrameGroundTruth(const Scene& scene, const FrameRecord& frame,
                                         const CameraParams& camera_params,
                                         const GroundTruthParams& params);

// Flat-shaded Lambertian preview lit by the sun of `time`.
RgbImage RenderPreview(const Scene& scene, const CameraModel& camera,
                       const TimeOfDay& time, double near_clip = 0.05);

nlohmann::json FrameGroundTruthToJson(const FrameGroundTruth& gt);

// float32 little-endian records [instance][vertex] of
// (world x, world y, world z, u, v, depth).
std::string EncodeVertexBuffer(const FrameGroundTruth& gt);

// Writes depth/<name>.png, instance/<name>.png, gt/<name>.json,
// vertices/<name>.bin and, when given, rgb/<name>.png under `root`.
void WriteFrameOutputs(const FrameGroundTruth& gt, const RgbImage* preview,
                       const std::filesystem::path& root);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_GROUNDTRUTH_H_
