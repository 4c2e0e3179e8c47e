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
#include "zebrasynth/groundtruth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "zebrasynth/error.h"
#include "zebrasynth/io_util.h"
#include "zebrasynth/random.h"

namespace zebrasynth {

using nlohmann::json;

std::optional<Box2D> ComputeBox2D(const InstanceMap& ids, int instance_id,
                                  int min_pixels) {
  Box2D box{ids.width(), ids.height(), 0, 0, instance_id, 0};
  for (int y = 0; y < ids.height(); ++y) {
    for (int x = 0; x < ids.width(); ++x) {
      if (ids.At(x, y) != instance_id) continue;
      box.x_min = std::min(box.x_min, x);
      box.y_min = std::min(box.y_min, y);
      box.x_max = std::max(box.x_max, x + 1);
      box.y_max = std::max(box.y_max, y + 1);
      ++box.pixel_count;
    }
  }
  if (box.pixel_count == 0 || box.pixel_count < min_pixels) return std::nullopt;
  return box;
}

std::vector<Box2D> ComputeBoxes(const InstanceMap& ids, int min_pixels) {
  std::map<int, Box2D> acc;
  for (int y = 0; y < ids.height(); ++y) {
    for (int x = 0; x < ids.width(); ++x) {
      const int id = ids.At(x, y);
      if (id == 0) continue;
      auto [it, fresh] = acc.try_emplace(id, Box2D{x, y, x + 1, y + 1, id, 0});
      Box2D& b = it->second;
      b.x_min = std::min(b.x_min, x);
      b.y_min = std::min(b.y_min, y);
      b.x_max = std::max(b.x_max, x + 1);
      b.y_max = std::max(b.y_max, y + 1);
      ++b.pixel_count;
    }
  }
  std::vector<Box2D> out;
  for (const auto& [id, b] : acc) {
    if (b.pixel_count >= min_pixels) out.push_back(b);
  }
  return out;
}

JointGroundTruth ProjectJoint(const Vec3& world, int instance_id,
                              const CameraModel& camera, const DepthMap& depth,
                              const InstanceMap& ids, double depth_tolerance) {
  JointGroundTruth j;
  j.world = world;
  const std::optional<Projection> p = camera.Project(world);
  if (!p) {
    j.u = j.v = std::numeric_limits<double>::quiet_NaN();
    j.depth = camera.ToCamera(world).x;
    return j;
  }
  j.in_front = true;
  j.u = p->u;
  j.v = p->v;
  j.depth = p->depth;
  j.in_image = p->u >= 0.0 && p->u < camera.width() && p->v >= 0.0 &&
               p->v < camera.height();
  if (!j.in_image) return j;
  const int x = static_cast<int>(std::floor(p->u));
  const int y = static_cast<int>(std::floor(p->v));
  j.visible = ids.At(x, y) == instance_id ||
              p->depth <= depth.At(x, y) + depth_tolerance;
  return j;
}

FrameGroundTruth ComputeFrameGroundTruth(const Scene& scene, const CameraModel& camera,
                                         const TimeOfDay& time,
                                         const GroundTruthParams& params) {
  if (!scene.catalog) throw InvalidArgument("scene has no asset catalog");
  RasterOutput raster = Rasterize(scene.instances, *scene.catalog, scene.terrain.get(),
                                  camera, params.near_clip);
  FrameGroundTruth gt(camera);
  gt.time = time;
  gt.boxes = ComputeBoxes(raster.ids, params.min_pixels);
  if (!scene.catalog->models.empty()) {
    gt.joint_names = scene.catalog->models.front().joint_names;
  }

  std::map<int, int> pixel_counts;
  for (int32_t id : raster.ids.data()) {
    if (id != 0) ++pixel_counts[id];
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  gt.instances.reserve(scene.instances.size());
  for (const PlacedInstance& inst : scene.instances) {
    InstanceGroundTruth ig;
    ig.instance_id = inst.instance_id;
    ig.model_id = inst.model_id;
    ig.frame_index = inst.frame_index;
    ig.scale = inst.scale;
    ig.yaw_deg = inst.yaw_deg;
    ig.position = inst.position;
    ig.world_obb = inst.world_obb;
    const auto it = pixel_counts.find(inst.instance_id);
    ig.visible_pixels = it == pixel_counts.end() ? 0 : it->second;
    ig.joints.reserve(inst.world_joints.size());
    for (const Vec3& w : inst.world_joints) {
      ig.joints.push_back(ProjectJoint(w, inst.instance_id, camera, raster.depth,
                                       raster.ids, params.joint_depth_tolerance));
    }
    ig.world_vertices = inst.world_vertices;
    ig.projected_vertices.reserve(inst.world_vertices.size());
    for (const Vec3& w : inst.world_vertices) {
      ig.projected_vertices.push_back(camera.Project(w).value_or(Projection{nan, nan, nan}));
    }
    gt.instances.push_back(std::move(ig));
  }
  gt.depth = std::move(raster.depth);
  gt.ids = std::move(raster.ids);
  return gt;
}

FrameGroundTruth ComputeFrameGroundTruth(const Scene& scene, const FrameRecord& frame,
                                         const CameraParams& camera_params,
                                         const GroundTruthParams& params) {
  FrameGroundTruth gt = ComputeFrameGroundTruth(
      scene, MakeCameraModel(frame.pose, camera_params), frame.time, params);
  gt.name = frame.Name();
  gt.pose = frame.pose;
  return gt;
}

// ---------------------------------------------------------------------------
// Preview

namespace {

Vec3 InstanceAlbedo(int id) {
  const uint64_t h = SplitMix64(static_cast<uint64_t>(id));
  const auto channel = [&](int shift) {
    return 0.55 + 0.4 * static_cast<double>((h >> shift) & 0xff) / 255.0;
  };
  return {channel(0), channel(8), channel(16)};
}

uint8_t ToByte(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

RgbImage RenderPreview(const Scene& scene, const CameraModel& camera,
                       const TimeOfDay& time, double near_clip) {
  Rasterizer r(camera, near_clip, /*keep_normals=*/true);
  if (scene.terrain) r.DrawTerrain(*scene.terrain);
  if (scene.catalog) {
    for (const PlacedInstance& inst : scene.instances) r.DrawInstance(inst, *scene.catalog);
  }
  const Vec3 sun = SunDirection(time);
  const bool day = sun.z > 0.0;
  const double ambient = day ? 0.3 : 0.08;
  const double daylight = day ? 0.4 + 0.6 * sun.z : 0.05;
  const Vec3 terrain_albedo{0.52, 0.58, 0.34};
  const Vec3 sky{0.55 * daylight, 0.70 * daylight, 0.95 * daylight};

  RgbImage img(camera.width(), camera.height(), Rgb8{});
  for (int y = 0; y < camera.height(); ++y) {
    for (int x = 0; x < camera.width(); ++x) {
      Vec3 c = sky;
      if (std::isfinite(r.depth().At(x, y))) {
        const int id = r.ids().At(x, y);
        const Vec3 albedo = id == 0 ? terrain_albedo : InstanceAlbedo(id);
        Vec3 n = r.normals().At(x, y);
        const double len = Norm(n);
        double diffuse = 0.0;
        if (len > 0.0 && day) {
          n = n / len;
          if (Dot(n, camera.RayDirection(x + 0.5, y + 0.5)) > 0.0) n = -n;
          diffuse = std::max(0.0, Dot(n, sun));
        }
        c = albedo * (ambient + (1.0 - ambient) * diffuse);
      }
      img.At(x, y) = {ToByte(c.x), ToByte(c.y), ToByte(c.z)};
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json Vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json NullableNumber(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json FrameGroundTruthToJson(const FrameGroundTruth& gt) {
  const CameraModel& cam = gt.camera;
  json boxes = json::array();
  for (const Box2D& b : gt.boxes) {
    boxes.push_back({{"instance_id", b.instance_id},
                     {"x_min", b.x_min},
                     {"y_min", b.y_min},
                     {"x_max", b.x_max},
                     {"y_max", b.y_max},
                     {"pixel_count", b.pixel_count}});
  }
  json instances = json::array();
  for (const InstanceGroundTruth& ig : gt.instances) {
    json joints = json::array();
    for (const JointGroundTruth& j : ig.joints) {
      joints.push_back({{"world", Vec(j.world)},
                        {"u", NullableNumber(j.u)},
                        {"v", NullableNumber(j.v)},
                        {"depth", j.depth},
                        {"in_front", j.in_front},
                        {"in_image", j.in_image},
                        {"visible", j.visible}});
    }
    const Rotation& q = ig.world_obb.orientation;
    instances.push_back(
        {{"instance_id", ig.instance_id},
         {"model_id", ig.model_id},
         {"animation_frame", ig.frame_index},
         {"scale", ig.scale},
         {"yaw_deg", ig.yaw_deg},
         {"position", Vec(ig.position)},
         {"obb",
          {{"center", Vec(ig.world_obb.center)},
           {"half_extents", Vec(ig.world_obb.half_extents)},
           {"quaternion_wxyz", json::array({q.w(), q.x(), q.y(), q.z()})}}},
         {"visible_pixels", ig.visible_pixels},
         {"vertex_count", ig.world_vertices.size()},
         {"joints", joints}});
  }
  return {{"name", gt.name},
          {"camera",
           {{"pose", PoseToJson(gt.pose)},
            {"width", cam.width()},
            {"height", cam.height()},
            {"fov_horizontal_deg", cam.fov_horizontal_deg()},
            {"focal_px", cam.focal()},
            {"cx", cam.cx()},
            {"cy", cam.cy()}}},
          {"time", {{"hour", gt.time.hour}, {"sun_direction", Vec(SunDirection(gt.time))}}},
          {"joint_names", gt.joint_names},
          {"boxes", boxes},
          {"instances", instances}};
}

std::string EncodeVertexBuffer(const FrameGroundTruth& gt) {
  std::string out;
  for (const InstanceGroundTruth& ig : gt.instances) {
    for (size_t i = 0; i < ig.world_vertices.size(); ++i) {
      const Vec3& w = ig.world_vertices[i];
      const Projection& p = ig.projected_vertices[i];
      for (double v : {w.x, w.y, w.z, p.u, p.v, p.depth}) {
        AppendF32(out, static_cast<float>(v));
      }
    }
  }
  return out;
}

void WriteFrameOutputs(const FrameGroundTruth& gt, const RgbImage* preview,
                       const std::filesystem::path& root) {
  if (gt.name.empty()) throw InvalidArgument("frame ground truth has no name");
  const std::string png = gt.name + ".png";
  WritePngGray16((root / "depth" / png).string(), DepthToMillimeters(gt.depth));
  WritePngGray16((root / "instance" / png).string(), InstanceIdsTo16(gt.ids));
  WriteFileAtomic(root / "gt" / (gt.name + ".json"),
                  FrameGroundTruthToJson(gt).dump(1) + "\n");
  WriteFileAtomic(root / "vertices" / (gt.name + ".bin"), EncodeVertexBuffer(gt));
  if (preview) WritePngRgb8((root / "rgb" / png).string(), *preview);
}

}  // namespace zebrasynth
