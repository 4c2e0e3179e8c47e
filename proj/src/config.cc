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
#include "zebrasynth/config.h"

#include <cmath>
#include <set>

#include "zebrasynth/error.h"
#include "zebrasynth/io_util.h"

namespace zebrasynth {

using nlohmann::json;

const char* StrategyName(Strategy s) { return s == Strategy::kFar ? "far" : "near"; }

Strategy ParseStrategy(const std::string& name) {
  if (name == "far") return Strategy::kFar;
  if (name == "near") return Strategy::kNear;
  throw InvalidArgument("unknown strategy '" + name + "' (expected far|near)");
}

namespace {

// Reads optional fields from one JSON object, tracking the field path for
// error messages and rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw DataError(path_.empty() ? "<root>" : path_, "expected an object");
  }
  // Call after the last field read.
  void Done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw DataError(Path(it.key()), "unknown field");
    }
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void Double(const std::string& key, double& out) {
    if (const json* v = Find(key)) out = AsDouble(*v, Path(key));
  }
  void Int(const std::string& key, int& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) throw DataError(Path(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void U64(const std::string& key, uint64_t& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<int64_t>() >= 0)) {
        throw DataError(Path(key), "expected a nonnegative integer");
      }
      out = v->get<uint64_t>();
    }
  }
  void String(const std::string& key, std::string& out) {
    if (const json* v = Find(key)) {
      if (!v->is_string()) throw DataError(Path(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void RangeField(const std::string& key, Range& out) {
    if (const json* v = Find(key)) {
      if (!v->is_array() || v->size() != 2) throw DataError(Path(key), "expected [lo, hi]");
      out = {AsDouble((*v)[0], Path(key)), AsDouble((*v)[1], Path(key))};
    }
  }
  void IntRangeField(const std::string& key, IntRange& out) {
    if (const json* v = Find(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() ||
          !(*v)[1].is_number_integer()) {
        throw DataError(Path(key), "expected [lo, hi] integers");
      }
      out = {(*v)[0].get<int>(), (*v)[1].get<int>()};
    }
  }

 private:
  static double AsDouble(const json& v, const std::string& path) {
    if (!v.is_number()) throw DataError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw DataError(path, "expected a finite number");
    return d;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void CheckRange(const Range& r, const std::string& path) {
  if (r.lo > r.hi) throw DataError(path, "range lower bound exceeds upper bound");
}

void CheckPositive(double v, const std::string& path) {
  if (!(v > 0.0)) throw DataError(path, "must be > 0");
}

json RangeJson(const Range& r) { return json::array({r.lo, r.hi}); }

}  // namespace

void ValidateConfig(const SceneConfig& c) {
  CheckPositive(c.terrain.size_x, "terrain.size_x");
  CheckPositive(c.terrain.size_y, "terrain.size_y");
  CheckPositive(c.terrain.cell_size, "terrain.cell_size");
  CheckPositive(c.terrain.wavelength, "terrain.wavelength");
  if (c.terrain.amplitude < 0.0) throw DataError("terrain.amplitude", "must be >= 0");
  if (c.terrain.heightfield.empty() &&
      (c.terrain.size_x / c.terrain.cell_size < 1.0 ||
       c.terrain.size_y / c.terrain.cell_size < 1.0)) {
    throw DataError("terrain.cell_size", "terrain must span at least one cell");
  }

  if (c.asset.sequences < 1) throw DataError("asset.sequences", "must be >= 1");
  if (c.asset.total_frames < c.asset.sequences) {
    throw DataError("asset.total_frames", "must be >= asset.sequences");
  }
  if (c.asset.distinct_models < 1) throw DataError("asset.distinct_models", "must be >= 1");
  if (c.asset.variant_spread < 0.0 || c.asset.variant_spread >= 0.5) {
    throw DataError("asset.variant_spread", "must lie in [0, 0.5)");
  }

  CheckRange(c.placement.rect_side, "placement.rect_side");
  CheckPositive(c.placement.rect_side.lo, "placement.rect_side");
  CheckRange(c.placement.scale, "placement.scale");
  CheckPositive(c.placement.scale.lo, "placement.scale");
  if (c.placement.count.lo > c.placement.count.hi) {
    throw DataError("placement.count", "range lower bound exceeds upper bound");
  }
  if (c.placement.count.lo < 0) throw DataError("placement.count", "must be >= 0");
  if (c.placement.count.hi > 65535) {
    throw DataError("placement.count", "at most 65535 instances fit a 16-bit instance map");
  }
  if (c.placement.retries < 0) throw DataError("placement.retries", "must be >= 0");

  CheckRange(c.camera.height_offset, "camera.height_offset");
  CheckRange(c.camera.planar_offset, "camera.planar_offset");
  CheckRange(c.camera.roll, "camera.roll");
  CheckRange(c.camera.yaw_jitter_far, "camera.yaw_jitter_far");
  CheckRange(c.camera.yaw_jitter_near, "camera.yaw_jitter_near");
  if (c.camera.near_margin < 0.0) throw DataError("camera.near_margin", "must be >= 0");
  if (c.camera.width < 1) throw DataError("camera.width", "must be >= 1");
  if (c.camera.height < 1) throw DataError("camera.height", "must be >= 1");
  if (!(c.camera.fov_deg > 0.0 && c.camera.fov_deg < 180.0)) {
    throw DataError("camera.fov_deg", "must lie in (0, 180)");
  }

  CheckRange(c.time.day_window, "time.day_window");
  if (c.time.day_window.lo < 0.0 || c.time.day_window.hi > 24.0) {
    throw DataError("time.day_window", "must lie within [0, 24]");
  }
  if (c.time.day_probability < 0.0 || c.time.day_probability > 1.0) {
    throw DataError("time.day_probability", "must lie in [0, 1]");
  }

  if (c.generation.environments < 1) throw DataError("generation.environments", "must be >= 1");
  if (c.generation.placements < 0) throw DataError("generation.placements", "must be >= 0");
  if (c.generation.time_randomizations < 1) {
    throw DataError("generation.time_randomizations", "must be >= 1");
  }
  if (c.generation.cameras < 1) throw DataError("generation.cameras", "must be >= 1");
  if (c.generation.strategies.empty()) {
    throw DataError("generation.strategies", "need at least one strategy");
  }

  if (c.groundtruth.min_pixels < 1) throw DataError("groundtruth.min_pixels", "must be >= 1");
  if (c.groundtruth.joint_depth_tolerance < 0.0) {
    throw DataError("groundtruth.joint_depth_tolerance", "must be >= 0");
  }
  CheckPositive(c.groundtruth.near_clip, "groundtruth.near_clip");
}

SceneConfig ConfigFromJson(const json& j) {
  SceneConfig c;
  {
    ObjectReader root(j, "");
    if (const json* t = root.Find("terrain")) {
      ObjectReader r(*t, "terrain");
      r.Double("size_x", c.terrain.size_x);
      r.Double("size_y", c.terrain.size_y);
      r.Double("cell_size", c.terrain.cell_size);
      r.Double("amplitude", c.terrain.amplitude);
      r.Double("wavelength", c.terrain.wavelength);
      r.U64("seed", c.terrain.seed);
      r.String("heightfield", c.terrain.heightfield);
      r.Done();
    }
    if (const json* a = root.Find("asset")) {
      ObjectReader r(*a, "asset");
      r.Int("sequences", c.asset.sequences);
      r.Int("total_frames", c.asset.total_frames);
      r.Int("distinct_models", c.asset.distinct_models);
      r.Double("variant_spread", c.asset.variant_spread);
      r.U64("seed", c.asset.seed);
      if (const json* b = r.Find("body")) {
        ObjectReader br(*b, "asset.body");
        QuadrupedParams& q = c.asset.body;
        br.Double("torso_length", q.torso_length);
        br.Double("hip_height", q.hip_height);
        br.Double("thigh_length", q.thigh_length);
        br.Double("shin_length", q.shin_length);
        br.Double("torso_half_width", q.torso_half_width);
        br.Double("torso_half_height", q.torso_half_height);
        br.Double("neck_length", q.neck_length);
        br.Double("head_length", q.head_length);
        br.Double("tail_length", q.tail_length);
        br.Done();
      }
      r.Done();
    }
    if (const json* p = root.Find("placement")) {
      ObjectReader r(*p, "placement");
      r.RangeField("rect_side", c.placement.rect_side);
      r.RangeField("scale", c.placement.scale);
      r.IntRangeField("count", c.placement.count);
      r.Int("retries", c.placement.retries);
      r.Done();
    }
    if (const json* cam = root.Find("camera")) {
      ObjectReader r(*cam, "camera");
      r.RangeField("height_offset", c.camera.height_offset);
      r.RangeField("planar_offset", c.camera.planar_offset);
      r.RangeField("roll", c.camera.roll);
      r.RangeField("yaw_jitter_far", c.camera.yaw_jitter_far);
      r.RangeField("yaw_jitter_near", c.camera.yaw_jitter_near);
      r.Double("near_margin", c.camera.near_margin);
      r.Double("pitch_offset", c.camera.pitch_offset);
      r.Int("width", c.camera.width);
      r.Int("height", c.camera.height);
      r.Double("fov_deg", c.camera.fov_deg);
      r.Done();
    }
    if (const json* t = root.Find("time")) {
      ObjectReader r(*t, "time");
      r.RangeField("day_window", c.time.day_window);
      r.Double("day_probability", c.time.day_probability);
      r.Done();
    }
    if (const json* g = root.Find("generation")) {
      ObjectReader r(*g, "generation");
      r.Int("environments", c.generation.environments);
      r.Int("placements", c.generation.placements);
      r.Int("time_randomizations", c.generation.time_randomizations);
      r.Int("cameras", c.generation.cameras);
      if (const json* s = r.Find("strategies")) {
        if (!s->is_array()) throw DataError("generation.strategies", "expected an array");
        c.generation.strategies.clear();
        for (const json& e : *s) {
          if (!e.is_string()) throw DataError("generation.strategies", "expected strings");
          try {
            c.generation.strategies.push_back(ParseStrategy(e.get<std::string>()));
          } catch (const InvalidArgument& ex) {
            throw DataError("generation.strategies", ex.what());
          }
        }
      }
      r.Done();
    }
    if (const json* g = root.Find("groundtruth")) {
      ObjectReader r(*g, "groundtruth");
      r.Int("min_pixels", c.groundtruth.min_pixels);
      r.Double("joint_depth_tolerance", c.groundtruth.joint_depth_tolerance);
      r.Double("near_clip", c.groundtruth.near_clip);
      r.Done();
    }
    root.Done();
  }
  ValidateConfig(c);
  return c;
}

json ConfigToJson(const SceneConfig& c) {
  json strategies = json::array();
  for (Strategy s : c.generation.strategies) strategies.push_back(StrategyName(s));
  const QuadrupedParams& q = c.asset.body;
  return {
      {"terrain",
       {{"size_x", c.terrain.size_x},
        {"size_y", c.terrain.size_y},
        {"cell_size", c.terrain.cell_size},
        {"amplitude", c.terrain.amplitude},
        {"wavelength", c.terrain.wavelength},
        {"seed", c.terrain.seed},
        {"heightfield", c.terrain.heightfield}}},
      {"asset",
       {{"sequences", c.asset.sequences},
        {"total_frames", c.asset.total_frames},
        {"distinct_models", c.asset.distinct_models},
        {"variant_spread", c.asset.variant_spread},
        {"seed", c.asset.seed},
        {"body",
         {{"torso_length", q.torso_length},
          {"hip_height", q.hip_height},
          {"thigh_length", q.thigh_length},
          {"shin_length", q.shin_length},
          {"torso_half_width", q.torso_half_width},
          {"torso_half_height", q.torso_half_height},
          {"neck_length", q.neck_length},
          {"head_length", q.head_length},
          {"tail_length", q.tail_length}}}}},
      {"placement",
       {{"rect_side", RangeJson(c.placement.rect_side)},
        {"scale", RangeJson(c.placement.scale)},
        {"count", json::array({c.placement.count.lo, c.placement.count.hi})},
        {"retries", c.placement.retries}}},
      {"camera",
       {{"height_offset", RangeJson(c.camera.height_offset)},
        {"planar_offset", RangeJson(c.camera.planar_offset)},
        {"roll", RangeJson(c.camera.roll)},
        {"yaw_jitter_far", RangeJson(c.camera.yaw_jitter_far)},
        {"yaw_jitter_near", RangeJson(c.camera.yaw_jitter_near)},
        {"near_margin", c.camera.near_margin},
        {"pitch_offset", c.camera.pitch_offset},
        {"width", c.camera.width},
        {"height", c.camera.height},
        {"fov_deg", c.camera.fov_deg}}},
      {"time",
       {{"day_window", RangeJson(c.time.day_window)},
        {"day_probability", c.time.day_probability}}},
      {"generation",
       {{"environments", c.generation.environments},
        {"placements", c.generation.placements},
        {"time_randomizations", c.generation.time_randomizations},
        {"cameras", c.generation.cameras},
        {"strategies", strategies}}},
      {"groundtruth",
       {{"min_pixels", c.groundtruth.min_pixels},
        {"joint_depth_tolerance", c.groundtruth.joint_depth_tolerance},
        {"near_clip", c.groundtruth.near_clip}}},
  };
}

SceneConfig LoadSceneConfig(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw DataError(path, std::string("malformed JSON: ") + e.what());
  }
  try {
    return ConfigFromJson(j);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.where(), e.detail());
  }
}

void SaveSceneConfig(const SceneConfig& c, const std::string& path) {
  WriteFileAtomic(path, ConfigToJson(c).dump(2) + "\n");
}

std::string ConfigDigest(const SceneConfig& c) {
  return Sha256Hex(ConfigToJson(c).dump());
}

}  // namespace zebrasynth
