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
#include "oracles/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zebrasynth::oracle {

double BilinearHeight(const Terrain& t, double x, double y) {
  const double gx = (x - t.origin_x()) / t.cell_size();
  const double gy = (y - t.origin_y()) / t.cell_size();
  int i = static_cast<int>(std::floor(gx));
  int j = static_cast<int>(std::floor(gy));
  i = std::clamp(i, 0, t.nx() - 2);
  j = std::clamp(j, 0, t.ny() - 2);
  const double fx = gx - i, fy = gy - j;
  return (1 - fx) * (1 - fy) * t.At(i, j) + fx * (1 - fy) * t.At(i + 1, j) +
         (1 - fx) * fy * t.At(i, j + 1) + fx * fy * t.At(i + 1, j + 1);
}

TrigProjection ProjectTrig(const Vec3& cam, double roll_deg, double pitch_deg,
                           double yaw_deg, int width, int height, double fov_deg,
                           const Vec3& p) {
  const double r = roll_deg * kPi / 180, pt = pitch_deg * kPi / 180, y = yaw_deg * kPi / 180;
  const Vec3 fwd{std::cos(pt) * std::cos(y), std::cos(pt) * std::sin(y), std::sin(pt)};
  const Vec3 left0{-std::sin(y), std::cos(y), 0.0};
  const Vec3 up0{-std::sin(pt) * std::cos(y), -std::sin(pt) * std::sin(y), std::cos(pt)};
  const Vec3 left = left0 * std::cos(r) + up0 * std::sin(r);
  const Vec3 up = up0 * std::cos(r) - left0 * std::sin(r);
  const Vec3 d = p - cam;
  const double x = Dot(d, fwd), yl = Dot(d, left), zu = Dot(d, up);
  TrigProjection out;
  if (x <= 0) return out;
  const double f = width / (2 * std::tan(fov_deg * kPi / 360));
  out.in_front = true;
  out.u = width / 2.0 - f * yl / x;
  out.v = height / 2.0 - f * zu / x;
  out.depth = x;
  return out;
}

bool CornerSat(const Obb& a, const Obb& b) {
  const auto ca = a.Corners();
  const auto cb = b.Corners();
  std::vector<Vec3> axes;
  for (int i = 0; i < 3; ++i) axes.push_back(a.Axis(i));
  for (int i = 0; i < 3; ++i) axes.push_back(b.Axis(i));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Vec3 c = Cross(a.Axis(i), b.Axis(j));
      if (Norm(c) > 1e-9) axes.push_back(c / Norm(c));
    }
  }
  for (const Vec3& ax : axes) {
    double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
    for (const Vec3& p : ca) {
      amin = std::min(amin, Dot(p, ax));
      amax = std::max(amax, Dot(p, ax));
    }
    for (const Vec3& p : cb) {
      bmin = std::min(bmin, Dot(p, ax));
      bmax = std::max(bmax, Dot(p, ax));
    }
    if (amax < bmin - 1e-9 || bmax < amin - 1e-9) return false;
  }
  return true;
}

namespace {

bool AnySampleInside(const Obb& a, const Obb& b, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double s[3] = {-1 + 2.0 * i / (n - 1), -1 + 2.0 * j / (n - 1),
                             -1 + 2.0 * k / (n - 1)};
        Vec3 p = a.center;
        for (int d = 0; d < 3; ++d) p += a.Axis(d) * (s[d] * a.half_extents[d]);
        const Vec3 q = p - b.center;
        bool inside = true;
        for (int d = 0; d < 3 && inside; ++d) {
          inside = std::abs(Dot(q, b.Axis(d))) <= b.half_extents[d];
        }
        if (inside) return true;
      }
    }
  }
  return false;
}

}  // namespace

bool SampledIntersect(const Obb& a, const Obb& b, int per_axis) {
  return AnySampleInside(a, b, per_axis) || AnySampleInside(b, a, per_axis);
}

std::optional<double> RayTriangle(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                  const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 p = Cross(dir, e2);
  const double det = Dot(e1, p);
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = origin - a;
  const double u = Dot(s, p) * inv;
  if (u < 0 || u > 1) return std::nullopt;
  const Vec3 q = Cross(s, e1);
  const double v = Dot(dir, q) * inv;
  if (v < 0 || u + v > 1) return std::nullopt;
  const double t = Dot(e2, q) * inv;
  if (t <= 0) return std::nullopt;
  return t;
}

double IntervalIou(const OBox& a, const OBox& b) {
  if (a.w <= 0 || a.h <= 0 || b.w <= 0 || b.h <= 0) return 0.0;
  const double ox = std::max(0.0, a.w + b.w - (std::max(a.x + a.w, b.x + b.w) -
                                               std::min(a.x, b.x)));
  const double oy = std::max(0.0, a.h + b.h - (std::max(a.y + a.h, b.y + b.h) -
                                               std::min(a.y, b.y)));
  const double inter = ox * oy;
  if (inter <= 0) return 0.0;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

std::vector<int> BruteMatch(const std::vector<OGt>& gts, const std::vector<ODet>& dets,
                            double threshold, int max_dets) {
  std::vector<int> result(dets.size(), -2);
  std::vector<bool> used_det(dets.size(), false);
  std::vector<bool> used_gt(gts.size(), false);
  // Images are independent; handle each detection's image lazily.
  std::vector<int64_t> images;
  for (const ODet& d : dets) images.push_back(d.image);
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  for (int64_t im : images) {
    for (int taken = 0; taken < max_dets; ++taken) {
      int pick = -1;
      for (size_t d = 0; d < dets.size(); ++d) {
        if (dets[d].image != im || used_det[d]) continue;
        if (pick < 0 || dets[d].score > dets[static_cast<size_t>(pick)].score) {
          pick = static_cast<int>(d);
        }
      }
      if (pick < 0) break;
      used_det[static_cast<size_t>(pick)] = true;
      int best = -1;
      double best_iou = 0.0;
      for (size_t g = 0; g < gts.size(); ++g) {
        if (gts[g].image != im || used_gt[g]) continue;
        const double iou = IntervalIou(dets[static_cast<size_t>(pick)].box, gts[g].box);
        if (iou < threshold) continue;
        if (best < 0 || iou > best_iou) {
          best = static_cast<int>(g);
          best_iou = iou;
        }
      }
      if (best >= 0) used_gt[static_cast<size_t>(best)] = true;
      result[static_cast<size_t>(pick)] = best;
    }
  }
  return result;
}

std::vector<bool> RankedFlags(const std::vector<OGt>&, const std::vector<ODet>& dets,
                              const std::vector<int>& match) {
  struct Item {
    double score;
    int64_t image;
    size_t index;
    bool tp;
  };
  std::vector<Item> items;
  for (size_t d = 0; d < dets.size(); ++d) {
    if (match[d] == -2) continue;
    items.push_back({dets[d].score, dets[d].image, d, match[d] >= 0});
  }
  // Within an image, equal scores keep input order (the per-image rank).
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.image != b.image) return a.image < b.image;
    return a.index < b.index;
  });
  std::vector<bool> flags;
  for (const Item& it : items) flags.push_back(it.tp);
  return flags;
}

double Ap101Direct(const std::vector<bool>& flags, int64_t n_gt) {
  if (n_gt == 0) return flags.empty() ? std::nan("") : 0.0;
  std::vector<double> rec, prec;
  int64_t tp = 0;
  for (size_t i = 0; i < flags.size(); ++i) {
    tp += flags[i] ? 1 : 0;
    rec.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k == 100 ? 1.0 : k * 0.01;
    double best = 0.0;
    for (size_t i = 0; i < rec.size(); ++i) {
      if (rec[i] >= r) best = std::max(best, prec[i]);
    }
    sum += best;
  }
  return sum / 101.0;
}

double ApContinuousDirect(const std::vector<bool>& flags, int64_t n_gt) {
  if (n_gt == 0) return flags.empty() ? std::nan("") : 0.0;
  std::vector<double> rec, prec;
  int64_t tp = 0;
  for (size_t i = 0; i < flags.size(); ++i) {
    tp += flags[i] ? 1 : 0;
    rec.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  double area = 0.0;
  for (size_t i = 0; i < rec.size(); ++i) {
    const double prev = i == 0 ? 0.0 : rec[i - 1];
    double best = 0.0;
    for (size_t j = i; j < prec.size(); ++j) best = std::max(best, prec[j]);
    area += (rec[i] - prev) * best;
  }
  return area;
}

namespace {

bool RayHitsAabb(const Vec3& o, const Vec3& d, const std::array<Vec3, 2>& box) {
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (o[i] < box[0][i] || o[i] > box[1][i]) return false;
      continue;
    }
    double a = (box[0][i] - o[i]) / d[i], b = (box[1][i] - o[i]) / d[i];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  return lo <= hi * (1 + 1e-12) + 1e-12;
}

void CastMesh(const std::vector<Vec3>& v, const std::vector<Triangle>& tris, int id,
              const Vec3& origin, const Vec3& dir, double min_t, RayHit& best,
              bool& any) {
  for (const Triangle& t : tris) {
    const auto hit = RayTriangle(origin, dir, v[static_cast<size_t>(t[0])],
                                 v[static_cast<size_t>(t[1])], v[static_cast<size_t>(t[2])]);
    if (hit && *hit >= min_t && (!any || *hit < best.t)) {
      best = {*hit, id};
      any = true;
    }
  }
}

}  // namespace

RayHit CastScene(const Scene& scene, const Vec3& origin, const Vec3& dir, double min_t) {
  RayHit best;
  bool any = false;
  if (scene.terrain) {
    CastMesh(scene.terrain->MeshVertices(), scene.terrain->MeshTriangles(), 0, origin, dir,
             min_t, best, any);
  }
  for (const PlacedInstance& inst : scene.instances) {
    if (!RayHitsAabb(origin, dir, inst.world_obb.Aabb())) continue;
    CastMesh(inst.world_vertices, scene.catalog->Model(inst.model_id).triangles,
             inst.instance_id, origin, dir, min_t, best, any);
  }
  return best;
}

}  // namespace zebrasynth::oracle
