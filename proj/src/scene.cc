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
#include "zebrasynth/scene.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>
#include "zebrasynth/error.h"
#include "zebrasynth/io_util.h"
#include "zebrasynth/random.h"

namespace zebrasynth {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Terrain

Terrain::Terrain(double origin_x, double origin_y, double cell_size, int nx,
                 int ny, std::vector<double> heights)
    : origin_x_(origin_x),
      origin_y_(origin_y),
      cell_size_(cell_size),
      nx_(nx),
      ny_(ny),
      heights_(std::move(heights)) {
  if (nx < 2 || ny < 2) throw InvalidArgument("terrain grid must be >= 2x2");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw InvalidArgument("terrain cell_size must be > 0");
  }
  if (heights_.size() != static_cast<size_t>(nx) * static_cast<size_t>(ny)) {
    throw InvalidArgument("terrain heights size does not match nx * ny");
  }
  for (double h : heights_) {
    if (!std::isfinite(h)) throw InvalidArgument("terrain height not finite");
  }
  extent_ = GridBounds();
}

Rect2 Terrain::GridBounds() const {
  return {origin_x_, origin_y_, origin_x_ + (nx_ - 1) * cell_size_,
          origin_y_ + (ny_ - 1) * cell_size_};
}

void Terrain::set_extent(const Rect2& r) {
  const Rect2 g = GridBounds();
  if (!(r.x_min < r.x_max && r.y_min < r.y_max) || r.x_min < g.x_min ||
      r.y_min < g.y_min || r.x_max > g.x_max || r.y_max > g.y_max) {
    throw InvalidArgument("terrain extent must be a nonempty subset of the grid");
  }
  extent_ = r;
}

double Terrain::Height(double x, double y) const {
  if (!GridBounds().Contains(x, y)) {
    throw InvalidArgument("terrain query outside extent");
  }
  const double fx = (x - origin_x_) / cell_size_;
  const double fy = (y - origin_y_) / cell_size_;
  const int i = std::min(static_cast<int>(std::floor(fx)), nx_ - 2);
  const int j = std::min(static_cast<int>(std::floor(fy)), ny_ - 2);
  const double tx = fx - i;
  const double ty = fy - j;
  // Nested lerps reproduce equal corner heights exactly.
  const double lo = At(i, j) + tx * (At(i + 1, j) - At(i, j));
  const double hi = At(i, j + 1) + tx * (At(i + 1, j + 1) - At(i, j + 1));
  return lo + ty * (hi - lo);
}

std::vector<Vec3> Terrain::MeshVertices() const {
  std::vector<Vec3> out;
  out.reserve(heights_.size());
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) out.push_back(Vertex(i, j));
  }
  return out;
}

std::vector<Triangle> Terrain::MeshTriangles() const {
  std::vector<Triangle> out;
  out.reserve(static_cast<size_t>(nx_ - 1) * (ny_ - 1) * 2);
  for (int j = 0; j + 1 < ny_; ++j) {
    for (int i = 0; i + 1 < nx_; ++i) {
      const int a = j * nx_ + i, b = a + 1, c = a + nx_, d = c + 1;
      out.push_back({a, b, d});
      out.push_back({a, d, c});
    }
  }
  return out;
}

Terrain MakeProceduralTerrain(const TerrainParams& p, int env_index) {
  if (!(p.cell_size > 0.0) || !(p.size_x > 0.0) || !(p.size_y > 0.0)) {
    throw InvalidArgument("terrain sizes must be positive");
  }
  const int nx = static_cast<int>(std::lround(p.size_x / p.cell_size)) + 1;
  const int ny = static_cast<int>(std::lround(p.size_y / p.cell_size)) + 1;
  Rng rng = StreamRng(p.seed, "terrain", {static_cast<uint64_t>(env_index)});

  struct Octave {
    double kx, ky, phase, weight;
  };
  static constexpr double kWeights[] = {0.5, 0.25, 0.15, 0.10};
  std::vector<Octave> octaves;
  for (int k = 0; k < 4; ++k) {
    const double theta = rng.Uniform(0.0, 2.0 * kPi);
    const double lambda = p.wavelength / std::pow(2.0, k);
    const double freq = 2.0 * kPi / lambda;
    octaves.push_back({freq * std::cos(theta), freq * std::sin(theta),
                       rng.Uniform(0.0, 2.0 * kPi), kWeights[k]});
  }
  const double x0 = -p.size_x / 2.0, y0 = -p.size_y / 2.0;
  std::vector<double> h(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = x0 + i * p.cell_size, y = y0 + j * p.cell_size;
      double z = 0.0;
      for (const Octave& o : octaves) {
        z += o.weight * std::sin(o.kx * x + o.ky * y + o.phase);
      }
      h[static_cast<size_t>(j) * nx + i] = p.amplitude * z;
    }
  }
  return Terrain(x0, y0, p.cell_size, nx, ny, std::move(h));
}

Terrain LoadHeightfield(const std::string& sidecar_path) {
  json meta;
  try {
    meta = json::parse(ReadFile(sidecar_path));
  } catch (const json::exception& e) {
    throw DataError(sidecar_path, std::string("malformed sidecar: ") + e.what());
  }
  int nx, ny;
  double cell, ox, oy;
  std::string data;
  try {
    nx = meta.at("width").get<int>();
    ny = meta.at("height").get<int>();
    cell = meta.at("cell_size").get<double>();
    ox = meta.at("origin").at(0).get<double>();
    oy = meta.at("origin").at(1).get<double>();
    data = meta.at("data").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(sidecar_path, std::string("bad sidecar field: ") + e.what());
  }
  if (nx < 2 || ny < 2 || !(cell > 0.0)) {
    throw DataError(sidecar_path, "grid must be >= 2x2 with cell_size > 0");
  }
  fs::path data_path(data);
  if (data_path.is_relative()) data_path = fs::path(sidecar_path).parent_path() / data_path;
  const std::string raw = ReadFile(data_path);
  const size_t n = static_cast<size_t>(nx) * static_cast<size_t>(ny);
  if (raw.size() != 4 * n) {
    throw DataError(data_path.string(), "raster size " + std::to_string(raw.size()) +
                                            " != 4 * width * height");
  }
  std::vector<double> h(n);
  for (size_t k = 0; k < n; ++k) {
    h[k] = ReadF32(raw.data() + 4 * k);
    if (!std::isfinite(h[k])) throw DataError(data_path.string(), "non-finite height");
  }
  return Terrain(ox, oy, cell, nx, ny, std::move(h));
}

void SaveHeightfield(const Terrain& t, const std::string& sidecar_path) {
  fs::path side(sidecar_path);
  fs::path data = side;
  data.replace_extension(".f32");
  std::string raw;
  raw.reserve(t.heights().size() * 4);
  for (double h : t.heights()) AppendF32(raw, static_cast<float>(h));
  WriteFileAtomic(data, raw);
  json meta = {{"width", t.nx()},
               {"height", t.ny()},
               {"cell_size", t.cell_size()},
               {"origin", {t.origin_x(), t.origin_y()}},
               {"data", data.filename().string()}};
  WriteFileAtomic(side, meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Quadruped

const char* GaitName(GaitKind kind) {
  switch (kind) {
    case GaitKind::kStanding:
      return "standing";
    case GaitKind::kGrazing:
      return "grazing";
    case GaitKind::kWalking:
      return "walking";
    case GaitKind::kTrotting:
      return "trotting";
  }
  return "unknown";
}

int AssetModel::JointIndex(const std::string& name) const {
  const auto it = std::find(joint_names.begin(), joint_names.end(), name);
  return it == joint_names.end() ? -1 : static_cast<int>(it - joint_names.begin());
}

namespace {

enum JointId {
  kPelvis,
  kSpine,
  kNeck,
  kHead,
  kMuzzle,
  kTailBase,
  kTailTip,
  kLegBase,  // Four legs follow, each {upper, knee, hoof}.
  kJointCount = kLegBase + 12,
};

constexpr const char* kLegNames[4] = {"front_left", "front_right", "hind_left",
                                      "hind_right"};

std::vector<std::string> JointNames() {
  std::vector<std::string> names = {"pelvis",  "spine",     "neck",    "head",
                                    "muzzle",  "tail_base", "tail_tip"};
  for (const char* leg : kLegNames) {
    names.push_back(std::string(leg) + "_upper");
    names.push_back(std::string(leg) + "_knee");
    names.push_back(std::string(leg) + "_hoof");
  }
  return names;
}

struct GaitParams {
  GaitKind kind;
  double stride;
  double lift;
  double bob;
  double neck_pitch_deg;  // Neck elevation above horizontal.
  double neck_amp_deg;
  double tail_amp_deg;
  int cycles;
};

GaitParams SampleGait(GaitKind kind, Rng& rng) {
  GaitParams g{kind, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1};
  g.tail_amp_deg = rng.Uniform(8.0, 25.0);
  g.cycles = static_cast<int>(rng.UniformInt(1, 2));
  switch (kind) {
    case GaitKind::kStanding:
      g.neck_pitch_deg = rng.Uniform(35.0, 55.0);
      g.neck_amp_deg = rng.Uniform(2.0, 8.0);
      break;
    case GaitKind::kGrazing:
      g.neck_pitch_deg = rng.Uniform(-50.0, -40.0);
      g.neck_amp_deg = rng.Uniform(2.0, 6.0);
      break;
    case GaitKind::kWalking:
      g.stride = rng.Uniform(0.16, 0.26);
      g.lift = rng.Uniform(0.06, 0.12);
      g.neck_pitch_deg = rng.Uniform(20.0, 40.0);
      g.neck_amp_deg = rng.Uniform(3.0, 8.0);
      break;
    case GaitKind::kTrotting:
      g.stride = rng.Uniform(0.22, 0.30);
      g.lift = rng.Uniform(0.10, 0.16);
      g.bob = rng.Uniform(0.01, 0.03);
      g.neck_pitch_deg = rng.Uniform(30.0, 45.0);
      g.neck_amp_deg = rng.Uniform(4.0, 10.0);
      break;
  }
  return g;
}

// Head angle below the neck line; grazing animals reach down to the grass.
double HeadDropDeg(GaitKind kind) {
  return kind == GaitKind::kGrazing ? 30.0 : 80.0;
}

// Knee position for a two-bone chain hip->knee->foot in the x-z plane of the
// leg. `bend` chooses which side the knee folds toward (+1 forward).
Vec3 SolveKnee(const Vec3& hip, const Vec3& foot, double thigh, double shin,
               double bend) {
  const Vec3 d = foot - hip;
  const double dist = Norm(d);
  const Vec3 u = d / dist;
  const double cos_a = std::clamp(
      (thigh * thigh + dist * dist - shin * shin) / (2.0 * thigh * dist), -1.0,
      1.0);
  const double sin_a = std::sqrt(1.0 - cos_a * cos_a);
  const Vec3 w{-u.z * bend, 0.0, u.x * bend};
  return hip + u * (thigh * cos_a) + w * (thigh * sin_a);
}

std::array<Vec3, kJointCount> PoseJoints(const QuadrupedParams& q,
                                         const GaitParams& g, double s) {
  const double phase = 2.0 * kPi * g.cycles * s;
  const double bob = 0.5 * g.bob * (1.0 + std::cos(2.0 * phase));
  const double h = q.hip_height + bob;
  const double half_l = q.torso_length / 2.0;

  std::array<Vec3, kJointCount> j;
  j[kPelvis] = {-half_l, 0.0, h + 0.12};
  j[kSpine] = {half_l, 0.0, h + 0.14};
  j[kNeck] = j[kSpine] + Vec3{0.05, 0.0, 0.15};
  const double neck_deg = g.neck_pitch_deg + g.neck_amp_deg * std::sin(phase);
  const double na = DegToRad(neck_deg);
  j[kHead] = j[kNeck] + Vec3{std::cos(na), 0.0, std::sin(na)} * q.neck_length;
  const double ha = na - DegToRad(HeadDropDeg(g.kind));
  j[kMuzzle] = j[kHead] + Vec3{std::cos(ha), 0.0, std::sin(ha)} * q.head_length;
  j[kTailBase] = j[kPelvis] + Vec3{-0.08, 0.0, 0.10};
  const double ta = DegToRad(g.tail_amp_deg) * std::sin(phase + 0.7);
  j[kTailTip] =
      j[kTailBase] +
      Normalized(Vec3{-0.35, 0.3 * std::sin(ta), -0.9}) * q.tail_length;

  // Lateral-sequence walk and diagonal trot phase offsets, per leg.
  static constexpr double kWalkOffset[4] = {0.25, 0.75, 0.0, 0.5};
  static constexpr double kTrotOffset[4] = {0.0, 0.5, 0.5, 0.0};
  const double reach = q.thigh_length + q.shin_length;
  for (int leg = 0; leg < 4; ++leg) {
    const bool front = leg < 2;
    const double side = (leg % 2 == 0) ? 1.0 : -1.0;
    const Vec3 hip{front ? half_l : -half_l, side * 0.16, h};
    Vec3 foot{hip.x, hip.y, 0.0};
    if (g.kind == GaitKind::kWalking || g.kind == GaitKind::kTrotting) {
      const double off = g.kind == GaitKind::kWalking ? kWalkOffset[leg]
                                                      : kTrotOffset[leg];
      const double lp = phase + 2.0 * kPi * off;
      foot.x += g.stride * std::sin(lp);
      foot.z = g.lift * std::max(0.0, std::cos(lp));
    }
    // Keep the foot reachable; lifting only moves it closer to the hip.
    const Vec3 d = foot - hip;
    const double dist = Norm(d);
    if (dist > 0.995 * reach) foot = hip + d * (0.995 * reach / dist);
    const int base = kLegBase + 3 * leg;
    j[base] = hip;
    j[base + 1] = SolveKnee(hip, foot, q.thigh_length, q.shin_length,
                            front ? 1.0 : -1.0);
    j[base + 2] = foot;
  }
  return j;
}

// 8 vertices around segment p0->p1, then 12 triangles.
void AddSegmentBox(const Vec3& p0, const Vec3& p1, double half_side,
                   double half_up, const Vec3& up_hint,
                   std::vector<Vec3>& verts, std::vector<Triangle>* tris) {
  Vec3 e = Normalized(p1 - p0);
  Vec3 side = Cross(up_hint, e);
  if (Norm(side) < 1e-9) side = Cross(Vec3{0, 1, 0}, e);
  side = Normalized(side);
  const Vec3 up = Cross(e, side);
  const int base = static_cast<int>(verts.size());
  for (int b = 0; b < 2; ++b) {
    const Vec3& p = b == 0 ? p0 : p1;
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) {
        verts.push_back(p + side * (s ? half_side : -half_side) +
                        up * (t ? half_up : -half_up));
      }
    }
  }
  if (tris == nullptr) return;
  static constexpr int kFaces[12][3] = {
      {0, 1, 3}, {0, 3, 2}, {4, 6, 7}, {4, 7, 5}, {0, 4, 5}, {0, 5, 1},
      {2, 3, 7}, {2, 7, 6}, {0, 2, 6}, {0, 6, 4}, {1, 5, 7}, {1, 7, 3}};
  for (const auto& f : kFaces) {
    tris->push_back({base + f[0], base + f[1], base + f[2]});
  }
}

std::vector<Vec3> BuildMesh(const QuadrupedParams& q,
                            const std::array<Vec3, kJointCount>& j,
                            std::vector<Triangle>* tris) {
  std::vector<Vec3> v;
  v.reserve(96);
  const Vec3 up{0, 0, 1};
  const Vec3 fwd{1, 0, 0};
  const Vec3 axis = Normalized(j[kSpine] - j[kPelvis]);
  AddSegmentBox(j[kPelvis] - axis * 0.20, j[kSpine] + axis * 0.15,
                q.torso_half_width, q.torso_half_height, up, v, tris);
  AddSegmentBox(j[kNeck], j[kHead], 0.08, 0.13, up, v, tris);
  AddSegmentBox(j[kHead], j[kMuzzle], 0.09, 0.11, up, v, tris);
  AddSegmentBox(j[kTailBase], j[kTailTip], 0.03, 0.03, up, v, tris);
  for (int leg = 0; leg < 4; ++leg) {
    const int base = kLegBase + 3 * leg;
    AddSegmentBox(j[base], j[base + 1], 0.075, 0.075, fwd, v, tris);
    AddSegmentBox(j[base + 1], j[base + 2], 0.045, 0.045, fwd, v, tris);
  }
  return v;
}

}  // namespace

std::vector<int> SpreadFrames(int n_sequences, int total_frames) {
  if (n_sequences < 1 || total_frames < n_sequences) {
    throw InvalidArgument("need n_sequences >= 1 and total_frames >= n_sequences");
  }
  std::vector<int> out(static_cast<size_t>(n_sequences), total_frames / n_sequences);
  for (int k = 0; k < total_frames % n_sequences; ++k) ++out[static_cast<size_t>(k)];
  return out;
}

AssetModel MakeQuadruped(const QuadrupedParams& params,
                         std::span<const int> frames_per_sequence,
                         uint64_t seed, int model_id) {
  if (frames_per_sequence.empty()) {
    throw InvalidArgument("MakeQuadruped: need at least one sequence");
  }
  for (int n : frames_per_sequence) {
    if (n < 1) throw InvalidArgument("MakeQuadruped: frames per sequence must be >= 1");
  }
  AssetModel model;
  model.id = model_id;
  model.joint_names = JointNames();
  for (size_t k = 0; k < frames_per_sequence.size(); ++k) {
    const auto kind = static_cast<GaitKind>(k % 4);
    Rng rng = StreamRng(seed, "gait", {k});
    const GaitParams gait = SampleGait(kind, rng);
    AnimationSequence seq;
    seq.name = std::string(GaitName(kind)) + "_" + std::to_string(k);
    seq.kind = kind;
    seq.first_frame = model.FrameCount();
    seq.frame_count = frames_per_sequence[k];
    for (int f = 0; f < seq.frame_count; ++f) {
      const double s = static_cast<double>(f) / seq.frame_count;
      const auto joints = PoseJoints(params, gait, s);
      AnimationFrame frame;
      frame.vertices = BuildMesh(params, joints,
                                 model.triangles.empty() ? &model.triangles : nullptr);
      frame.joints.assign(joints.begin(), joints.end());
      frame.obb = ObbFromVertices(frame.vertices);
      model.frames.push_back(std::move(frame));
    }
    model.sequences.push_back(std::move(seq));
  }
  return model;
}

AssetModel MakeQuadruped(const QuadrupedParams& params, int n_sequences,
                         int frames_per_sequence, uint64_t seed, int model_id) {
  if (n_sequences < 1 || frames_per_sequence < 1) {
    throw InvalidArgument("MakeQuadruped: counts must be >= 1");
  }
  const std::vector<int> lengths(static_cast<size_t>(n_sequences), frames_per_sequence);
  return MakeQuadruped(params, lengths, seed, model_id);
}

AssetCatalog BuildCatalog(const AssetParams& p) {
  if (p.distinct_models < 1) throw InvalidArgument("distinct_models must be >= 1");
  const std::vector<int> lengths = SpreadFrames(p.sequences, p.total_frames);
  AssetCatalog catalog;
  for (int m = 0; m < p.distinct_models; ++m) {
    QuadrupedParams body = p.body;
    if (m > 0) {
      Rng rng = StreamRng(p.seed, "variant", {static_cast<uint64_t>(m)});
      const double torso = rng.Uniform(1.0 - p.variant_spread, 1.0 + p.variant_spread);
      const double legs = rng.Uniform(1.0 - p.variant_spread, 1.0 + p.variant_spread);
      const double neck = rng.Uniform(1.0 - p.variant_spread, 1.0 + p.variant_spread);
      body.torso_length *= torso;
      body.hip_height *= legs;
      body.thigh_length *= legs;
      body.shin_length *= legs;
      body.neck_length *= neck;
    }
    catalog.models.push_back(MakeQuadruped(body, lengths, DeriveSeed(p.seed, "model", {static_cast<uint64_t>(m)}), m));
  }
  return catalog;
}

// ---------------------------------------------------------------------------
// Instances

Vec3 ModelToWorld(const Vec3& p, double scale, double yaw_deg,
                  const Vec3& position) {
  const double c = std::cos(DegToRad(yaw_deg)), s = std::sin(DegToRad(yaw_deg));
  const Vec3 q = p * scale;
  return {position.x + c * q.x - s * q.y, position.y + s * q.x + c * q.y,
          position.z + q.z};
}

Obb TransformObb(const Obb& box, double scale, double yaw_deg,
                 const Vec3& position) {
  Obb out;
  out.center = ModelToWorld(box.center, scale, yaw_deg, position);
  out.half_extents = box.half_extents * scale;
  out.orientation =
      Rotation::FromAxisAngle({0, 0, 1}, DegToRad(yaw_deg)) * box.orientation;
  return out;
}

PlacedInstance Instantiate(const AssetModel& model, int frame_index,
                           double scale, double yaw_deg, const Vec3& position,
                           int instance_id) {
  if (frame_index < 0 || frame_index >= model.FrameCount()) {
    throw InvalidArgument("Instantiate: frame index out of range");
  }
  const AnimationFrame& f = model.frames[static_cast<size_t>(frame_index)];
  PlacedInstance inst;
  inst.instance_id = instance_id;
  inst.model_id = model.id;
  inst.frame_index = frame_index;
  inst.scale = scale;
  inst.yaw_deg = yaw_deg;
  inst.position = position;
  inst.world_obb = TransformObb(f.obb, scale, yaw_deg, position);
  inst.world_joints.reserve(f.joints.size());
  for (const Vec3& p : f.joints) {
    inst.world_joints.push_back(ModelToWorld(p, scale, yaw_deg, position));
  }
  inst.world_vertices.reserve(f.vertices.size());
  for (const Vec3& p : f.vertices) {
    inst.world_vertices.push_back(ModelToWorld(p, scale, yaw_deg, position));
  }
  return inst;
}

}  // namespace zebrasynth
