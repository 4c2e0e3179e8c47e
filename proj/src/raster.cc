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
#include "zebrasynth/raster.h"

#include <algorithm>
#include <cmath>

#include "zebrasynth/error.h"

namespace zebrasynth {
namespace {

// Evaluated with the endpoints in a canonical order so the two triangles
// sharing an edge see exactly negated values.
double Edge(double au, double av, double bu, double bv, double pu, double pv) {
  if (au > bu || (au == bu && av > bv)) {
    return -((au - bu) * (pv - bv) - (av - bv) * (pu - bu));
  }
  return (bu - au) * (pv - av) - (bv - av) * (pu - au);
}

// Tie rule for a pixel center exactly on an edge from a to b.
bool OwnsEdge(double au, double av, double bu, double bv) {
  const double du = bu - au, dv = bv - av;
  return dv > 0.0 || (dv == 0.0 && du < 0.0);
}

Vec3 Lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

}  // namespace

Rasterizer::Rasterizer(const CameraModel& camera, double near_clip, bool keep_normals)
    : camera_(camera),
      near_clip_(near_clip),
      keep_normals_(keep_normals),
      depth_(camera.width(), camera.height(), kBackgroundDepth),
      ids_(camera.width(), camera.height(), 0) {
  if (!(near_clip > 0.0)) throw InvalidArgument("near_clip must be positive");
  if (keep_normals_) normals_ = Grid<Vec3>(camera.width(), camera.height(), Vec3{});
}

void Rasterizer::DrawTriangle(const Vec3& a, const Vec3& b, const Vec3& c,
                              int32_t id) {
  const Vec3 n = keep_normals_ ? Cross(b - a, c - a) : Vec3{};
  DrawCameraTriangle(camera_.ToCamera(a), camera_.ToCamera(b), camera_.ToCamera(c),
                     id, n);
}

void Rasterizer::DrawMesh(std::span<const Vec3> vertices,
                          std::span<const Triangle> triangles, int32_t id) {
  std::vector<Vec3> cam(vertices.size());
  for (size_t i = 0; i < vertices.size(); ++i) cam[i] = camera_.ToCamera(vertices[i]);
  for (const Triangle& t : triangles) {
    const size_t i0 = static_cast<size_t>(t[0]), i1 = static_cast<size_t>(t[1]),
                 i2 = static_cast<size_t>(t[2]);
    if (cam[i0].x < near_clip_ && cam[i1].x < near_clip_ && cam[i2].x < near_clip_) {
      continue;
    }
    const Vec3 n = keep_normals_
                       ? Cross(vertices[i1] - vertices[i0], vertices[i2] - vertices[i0])
                       : Vec3{};
    DrawCameraTriangle(cam[i0], cam[i1], cam[i2], id, n);
  }
}

void Rasterizer::DrawTerrain(const Terrain& terrain) {
  const std::vector<Vec3> vertices = terrain.MeshVertices();
  const std::vector<Triangle> triangles = terrain.MeshTriangles();
  DrawMesh(vertices, triangles, 0);
}

void Rasterizer::DrawInstance(const PlacedInstance& instance,
                              const AssetCatalog& catalog) {
  DrawMesh(instance.world_vertices, catalog.Model(instance.model_id).triangles,
           instance.instance_id);
}

void Rasterizer::DrawCameraTriangle(const Vec3& a, const Vec3& b, const Vec3& c,
                                    int32_t id, const Vec3& normal) {
  // Sutherland-Hodgman against the plane x = near_clip.
  const Vec3 in[3] = {a, b, c};
  Vec3 poly[4];
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& p = in[i];
    const Vec3& q = in[(i + 1) % 3];
    const bool p_in = p.x >= near_clip_;
    const bool q_in = q.x >= near_clip_;
    if (p_in) poly[n++] = p;
    if (p_in != q_in) poly[n++] = Lerp(p, q, (near_clip_ - p.x) / (q.x - p.x));
  }
  if (n < 3) return;

  const double f = camera_.focal();
  double pu[4], pv[4], pw[4];
  for (int i = 0; i < n; ++i) {
    pw[i] = 1.0 / poly[i].x;
    pu[i] = camera_.cx() - f * poly[i].y * pw[i];
    pv[i] = camera_.cy() - f * poly[i].z * pw[i];
  }
  for (int k = 1; k + 1 < n; ++k) {
    const double u[3] = {pu[0], pu[k], pu[k + 1]};
    const double v[3] = {pv[0], pv[k], pv[k + 1]};
    const double w[3] = {pw[0], pw[k], pw[k + 1]};
    FillProjected(u, v, w, id, normal);
  }
}

void Rasterizer::FillProjected(const double (&u_in)[3], const double (&v_in)[3],
                               const double (&w_in)[3], int32_t id,
                               const Vec3& normal) {
  double u[3] = {u_in[0], u_in[1], u_in[2]};
  double v[3] = {v_in[0], v_in[1], v_in[2]};
  double w[3] = {w_in[0], w_in[1], w_in[2]};
  double area = Edge(u[0], v[0], u[1], v[1], u[2], v[2]);
  if (!(std::abs(area) > 0.0) || !std::isfinite(area)) return;
  if (area < 0.0) {
    std::swap(u[1], u[2]);
    std::swap(v[1], v[2]);
    std::swap(w[1], w[2]);
    area = -area;
  }

  const double min_u = std::min({u[0], u[1], u[2]});
  const double max_u = std::max({u[0], u[1], u[2]});
  const double min_v = std::min({v[0], v[1], v[2]});
  const double max_v = std::max({v[0], v[1], v[2]});
  const int width = depth_.width(), height = depth_.height();
  const double x_lo = std::max(std::ceil(min_u - 0.5), 0.0);
  const double x_hi = std::min(std::floor(max_u - 0.5), width - 1.0);
  const double y_lo = std::max(std::ceil(min_v - 0.5), 0.0);
  const double y_hi = std::min(std::floor(max_v - 0.5), height - 1.0);
  if (x_lo > x_hi || y_lo > y_hi) return;

  // Edge i is opposite vertex i.
  const bool owns[3] = {OwnsEdge(u[1], v[1], u[2], v[2]),
                        OwnsEdge(u[2], v[2], u[0], v[0]),
                        OwnsEdge(u[0], v[0], u[1], v[1])};
  const double inv_area = 1.0 / area;
  for (int y = static_cast<int>(y_lo); y <= static_cast<int>(y_hi); ++y) {
    const double sv = y + 0.5;
    for (int x = static_cast<int>(x_lo); x <= static_cast<int>(x_hi); ++x) {
      const double su = x + 0.5;
      const double e[3] = {Edge(u[1], v[1], u[2], v[2], su, sv),
                           Edge(u[2], v[2], u[0], v[0], su, sv),
                           Edge(u[0], v[0], u[1], v[1], su, sv)};
      bool inside = true;
      for (int i = 0; i < 3 && inside; ++i) {
        inside = e[i] > 0.0 || (e[i] == 0.0 && owns[i]);
      }
      if (!inside) continue;
      const double inv_depth = (e[0] * w[0] + e[1] * w[1] + e[2] * w[2]) * inv_area;
      if (!(inv_depth > 0.0)) continue;
      const double depth = 1.0 / inv_depth;
      double& zbuf = depth_.At(x, y);
      if (depth < zbuf) {
        zbuf = depth;
        ids_.At(x, y) = id;
        if (keep_normals_) normals_.At(x, y) = normal;
      }
    }
  }
}

RasterOutput Rasterize(std::span<const PlacedInstance> instances,
                       const AssetCatalog& catalog, const Terrain* terrain,
                       const CameraModel& camera, double near_clip) {
  Rasterizer r(camera, near_clip);
  if (terrain) r.DrawTerrain(*terrain);
  for (const PlacedInstance& inst : instances) r.DrawInstance(inst, catalog);
  return {r.TakeDepth(), r.TakeIds()};
}

}  // namespace zebrasynth
