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
#include "zebrasynth/geometry.h"

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "zebrasynth/error.h"

namespace zebrasynth {

Vec3 Normalized(const Vec3& v) {
  const double n = Norm(v);
  if (n == 0.0) return v;
  return v / n;
}

// ---------------------------------------------------------------------------
// Rotation

Rotation Rotation::FromQuaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("quaternion must be finite and nonzero");
  }
  return FromRaw(w / n, x / n, y / n, z / n);
}

Rotation Rotation::FromAxisAngle(const Vec3& axis, double angle_rad) {
  const Vec3 a = Normalized(axis);
  if (Norm(a) == 0.0) return Rotation();
  const double s = std::sin(angle_rad / 2.0);
  return FromQuaternion(std::cos(angle_rad / 2.0), a.x * s, a.y * s, a.z * s);
}

Rotation Rotation::FromRollPitchYaw(double roll_deg, double pitch_deg,
                                    double yaw_deg) {
  const Rotation yaw = FromAxisAngle({0, 0, 1}, DegToRad(yaw_deg));
  const Rotation pitch = FromAxisAngle({0, 1, 0}, -DegToRad(pitch_deg));
  const Rotation roll = FromAxisAngle({1, 0, 0}, DegToRad(roll_deg));
  return yaw * pitch * roll;
}

Rotation Rotation::FromMatrix(const Mat3& m) {
  // Shepperd's method: pivot on the largest of trace and diagonal.
  const double trace = m[0][0] + m[1][1] + m[2][2];
  double w, x, y, z;
  if (trace > m[0][0] && trace > m[1][1] && trace > m[2][2]) {
    const double s = 2.0 * std::sqrt(1.0 + trace);
    w = 0.25 * s;
    x = (m[2][1] - m[1][2]) / s;
    y = (m[0][2] - m[2][0]) / s;
    z = (m[1][0] - m[0][1]) / s;
  } else if (m[0][0] >= m[1][1] && m[0][0] >= m[2][2]) {
    const double s = 2.0 * std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]);
    w = (m[2][1] - m[1][2]) / s;
    x = 0.25 * s;
    y = (m[0][1] + m[1][0]) / s;
    z = (m[0][2] + m[2][0]) / s;
  } else if (m[1][1] >= m[2][2]) {
    const double s = 2.0 * std::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]);
    w = (m[0][2] - m[2][0]) / s;
    x = (m[0][1] + m[1][0]) / s;
    y = 0.25 * s;
    z = (m[1][2] + m[2][1]) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]);
    w = (m[1][0] - m[0][1]) / s;
    x = (m[0][2] + m[2][0]) / s;
    y = (m[1][2] + m[2][1]) / s;
    z = 0.25 * s;
  }
  if (w < 0.0) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  return FromQuaternion(w, x, y, z);
}

Vec3 Rotation::Rotate(const Vec3& v) const {
  const Vec3 q{x_, y_, z_};
  const Vec3 t = 2.0 * Cross(q, v);
  return v + w_ * t + Cross(q, t);
}

Vec3 Rotation::InverseRotate(const Vec3& v) const {
  const Vec3 q{-x_, -y_, -z_};
  const Vec3 t = 2.0 * Cross(q, v);
  return v + w_ * t + Cross(q, t);
}

Rotation Rotation::operator*(const Rotation& o) const {
  const double w = w_ * o.w_ - x_ * o.x_ - y_ * o.y_ - z_ * o.z_;
  const double x = w_ * o.x_ + x_ * o.w_ + y_ * o.z_ - z_ * o.y_;
  const double y = w_ * o.y_ - x_ * o.z_ + y_ * o.w_ + z_ * o.x_;
  const double z = w_ * o.z_ + x_ * o.y_ - y_ * o.x_ + z_ * o.w_;
  return FromQuaternion(w, x, y, z);
}

Mat3 Rotation::ToMatrix() const {
  const double ww = w_ * w_, xx = x_ * x_, yy = y_ * y_, zz = z_ * z_;
  const double xy = x_ * y_, xz = x_ * z_, yz = y_ * z_;
  const double wx = w_ * x_, wy = w_ * y_, wz = w_ * z_;
  Mat3 m;
  m[0] = {ww + xx - yy - zz, 2.0 * (xy - wz), 2.0 * (xz + wy)};
  m[1] = {2.0 * (xy + wz), ww - xx + yy - zz, 2.0 * (yz - wx)};
  m[2] = {2.0 * (xz - wy), 2.0 * (yz + wx), ww - xx - yy + zz};
  return m;
}

Vec3 Rotation::Axis(int i) const {
  const Mat3 m = ToMatrix();
  return {m[0][i], m[1][i], m[2][i]};
}

// ---------------------------------------------------------------------------
// Obb

std::array<Vec3, 8> Obb::Corners() const {
  const Vec3 ax = Axis(0) * half_extents.x;
  const Vec3 ay = Axis(1) * half_extents.y;
  const Vec3 az = Axis(2) * half_extents.z;
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = center + ((i & 1) ? ax : -ax) + ((i & 2) ? ay : -ay) +
             ((i & 4) ? az : -az);
  }
  return out;
}

bool Obb::Contains(const Vec3& p, double slack) const {
  const Vec3 local = orientation.InverseRotate(p - center);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(local[i]) > half_extents[i] + slack) return false;
  }
  return true;
}

std::array<Vec3, 2> Obb::Aabb() const {
  const Mat3 m = orientation.ToMatrix();
  Vec3 r;
  for (int i = 0; i < 3; ++i) {
    r[i] = std::abs(m[i][0]) * half_extents.x +
           std::abs(m[i][1]) * half_extents.y +
           std::abs(m[i][2]) * half_extents.z;
  }
  return {center - r, center + r};
}

namespace {

struct Frame3 {
  std::array<Vec3, 3> axes;  // Orthonormal, right-handed.
};

Obb FitAlong(std::span<const Vec3> pts, const Frame3& f) {
  Vec3 lo{std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -lo;
  for (const Vec3& p : pts) {
    for (int i = 0; i < 3; ++i) {
      const double d = Dot(p, f.axes[i]);
      lo[i] = std::min(lo[i], d);
      hi[i] = std::max(hi[i], d);
    }
  }
  Obb box;
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    const double mid = 0.5 * (lo[i] + hi[i]);
    box.center += f.axes[i] * mid;
    box.half_extents[i] = 0.5 * (hi[i] - lo[i]);
    for (int r = 0; r < 3; ++r) m[r][i] = f.axes[i][r];
  }
  box.orientation = Rotation::FromMatrix(m);
  return box;
}

double Cross2(double ax, double ay, double bx, double by) {
  return ax * by - ay * bx;
}

// Andrew's monotone chain; returns hull vertices counter-clockwise.
std::vector<std::array<double, 2>> ConvexHull2(
    std::vector<std::array<double, 2>> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<std::array<double, 2>> h(2 * p.size());
  size_t k = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && Cross2(h[k - 1][0] - h[k - 2][0], h[k - 1][1] - h[k - 2][1],
                            p[i][0] - h[k - 2][0], p[i][1] - h[k - 2][1]) <= 0) {
      --k;
    }
    h[k++] = p[i];
  }
  for (size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && Cross2(h[k - 1][0] - h[k - 2][0], h[k - 1][1] - h[k - 2][1],
                            p[i - 1][0] - h[k - 2][0],
                            p[i - 1][1] - h[k - 2][1]) <= 0) {
      --k;
    }
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

// Unit direction of the minimum-area enclosing rectangle of a planar cloud.
// One side of the optimal rectangle is collinear with a hull edge.
std::array<double, 2> MinAreaDirection(
    const std::vector<std::array<double, 2>>& pts) {
  const auto hull = ConvexHull2(pts);
  std::array<double, 2> best{1.0, 0.0};
  if (hull.size() < 2) return best;
  double best_area = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len = std::hypot(dx, dy);
    if (len == 0.0) continue;
    dx /= len;
    dy /= len;
    double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
    double lo_v = lo_u, hi_v = -lo_u;
    for (const auto& p : hull) {
      const double u = p[0] * dx + p[1] * dy;
      const double v = -p[0] * dy + p[1] * dx;
      lo_u = std::min(lo_u, u);
      hi_u = std::max(hi_u, u);
      lo_v = std::min(lo_v, v);
      hi_v = std::max(hi_v, v);
    }
    const double area = (hi_u - lo_u) * (hi_v - lo_v);
    if (area < best_area) {
      best_area = area;
      best = {dx, dy};
    }
  }
  return best;
}

// Orthonormal right-handed frame whose third axis is `n`, with the in-plane
// axes chosen by the minimum-area rectangle of the projected cloud.
Frame3 CaliperFrame(std::span<const Vec3> pts, const Vec3& n) {
  const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 a = Normalized(Cross(helper, n));
  const Vec3 b = Cross(n, a);
  std::vector<std::array<double, 2>> flat;
  flat.reserve(pts.size());
  for (const Vec3& p : pts) flat.push_back({Dot(p, a), Dot(p, b)});
  const auto dir = MinAreaDirection(flat);
  const Vec3 e0 = Normalized(a * dir[0] + b * dir[1]);
  const Vec3 e1 = Cross(n, e0);
  return {{e0, e1, n}};
}

// Of the 24 axis relabelings of a box, picks the one closest to identity.
Obb Canonicalize(const Obb& box) {
  static constexpr std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  const std::array<Vec3, 3> ax = {box.Axis(0), box.Axis(1), box.Axis(2)};
  double best_score = -std::numeric_limits<double>::infinity();
  Obb best = box;
  for (const auto& perm : kPerms) {
    for (int signs = 0; signs < 8; ++signs) {
      std::array<Vec3, 3> cand;
      for (int j = 0; j < 3; ++j) {
        cand[j] = ax[perm[j]] * (((signs >> j) & 1) ? -1.0 : 1.0);
      }
      if (Dot(Cross(cand[0], cand[1]), cand[2]) < 0.0) continue;
      const double score = cand[0].x + cand[1].y + cand[2].z;
      if (score > best_score + 1e-12) {
        best_score = score;
        Mat3 m;
        for (int j = 0; j < 3; ++j) {
          for (int r = 0; r < 3; ++r) m[r][j] = cand[j][r];
        }
        best.orientation = Rotation::FromMatrix(m);
        best.half_extents = {box.half_extents[perm[0]],
                             box.half_extents[perm[1]],
                             box.half_extents[perm[2]]};
      }
    }
  }
  return best;
}

}  // namespace

Obb ObbFromVertices(std::span<const Vec3> vertices) {
  if (vertices.empty()) {
    throw InvalidArgument("ObbFromVertices: empty vertex list");
  }
  Vec3 mean;
  for (const Vec3& v : vertices) {
    if (!IsFinite(v)) {
      throw InvalidArgument("ObbFromVertices: non-finite vertex");
    }
    mean += v;
  }
  mean = mean / static_cast<double>(vertices.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& v : vertices) {
    const Eigen::Vector3d d(v.x - mean.x, v.y - mean.y, v.z - mean.z);
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(vertices.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Eigen::Matrix3d evec = solver.eigenvectors();

  std::array<Vec3, 3> pca;
  for (int i = 0; i < 3; ++i) {
    pca[i] = Normalized(Vec3{evec(0, i), evec(1, i), evec(2, i)});
  }
  pca[2] = Normalized(Cross(pca[0], pca[1]));
  pca[1] = Cross(pca[2], pca[0]);

  // PCA axes alone are arbitrary for isotropic clouds (a cube has a scalar
  // covariance), so each principal direction and world up are also tried as
  // a box normal with a min-area rectangle in the orthogonal plane.
  Obb best = FitAlong(vertices, Frame3{pca});
  const std::array<Vec3, 4> normals = {pca[0], pca[1], pca[2], Vec3{0, 0, 1}};
  for (const Vec3& n : normals) {
    const Obb cand = FitAlong(vertices, CaliperFrame(vertices, n));
    if (cand.Volume() < best.Volume() * (1.0 - 1e-12)) best = cand;
  }
  return Canonicalize(best);
}

bool ObbIntersects(const Obb& a, const Obb& b) {
  // Guards the edge-edge axes against near-parallel edge pairs.
  constexpr double kEps = 1e-9;
  const std::array<Vec3, 3> au = {a.Axis(0), a.Axis(1), a.Axis(2)};
  const std::array<Vec3, 3> bu = {b.Axis(0), b.Axis(1), b.Axis(2)};
  const Vec3& ae = a.half_extents;
  const Vec3& be = b.half_extents;

  double r[3][3], abs_r[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r[i][j] = Dot(au[i], bu[j]);
      abs_r[i][j] = std::abs(r[i][j]) + kEps;
    }
  }
  const Vec3 d = b.center - a.center;
  const double t[3] = {Dot(d, au[0]), Dot(d, au[1]), Dot(d, au[2])};

  for (int i = 0; i < 3; ++i) {
    const double ra = ae[i];
    const double rb =
        be[0] * abs_r[i][0] + be[1] * abs_r[i][1] + be[2] * abs_r[i][2];
    if (std::abs(t[i]) > ra + rb) return false;
  }
  for (int j = 0; j < 3; ++j) {
    const double ra =
        ae[0] * abs_r[0][j] + ae[1] * abs_r[1][j] + ae[2] * abs_r[2][j];
    const double rb = be[j];
    const double tj = t[0] * r[0][j] + t[1] * r[1][j] + t[2] * r[2][j];
    if (std::abs(tj) > ra + rb) return false;
  }
  // a_i x b_j.
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int j = 0; j < 3; ++j) {
      const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      const double ra = ae[i1] * abs_r[i2][j] + ae[i2] * abs_r[i1][j];
      const double rb = be[j1] * abs_r[i][j2] + be[j2] * abs_r[i][j1];
      const double tl = t[i2] * r[i1][j] - t[i1] * r[i2][j];
      if (std::abs(tl) > ra + rb) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Camera

CameraModel::CameraModel(const Vec3& position, const Rotation& orientation,
                         int width, int height, double fov_horizontal_deg)
    : CameraModel(position, orientation, width, height, fov_horizontal_deg,
                  width / 2.0, height / 2.0) {}

CameraModel::CameraModel(const Vec3& position, const Rotation& orientation,
                         int width, int height, double fov_horizontal_deg,
                         double cx, double cy)
    : position_(position),
      orientation_(orientation),
      width_(width),
      height_(height),
      fov_deg_(fov_horizontal_deg),
      cx_(cx),
      cy_(cy) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("camera width and height must be >= 1");
  }
  if (!(fov_horizontal_deg > 0.0 && fov_horizontal_deg < 180.0)) {
    throw InvalidArgument("camera fov must lie in (0, 180) degrees");
  }
  if (!IsFinite(position)) {
    throw InvalidArgument("camera position must be finite");
  }
  focal_ = width / (2.0 * std::tan(DegToRad(fov_horizontal_deg) / 2.0));
}

std::optional<Projection> CameraModel::Project(const Vec3& p) const {
  const Vec3 c = ToCamera(p);
  if (!(c.x > 0.0)) return std::nullopt;
  return Projection{cx_ - focal_ * c.y / c.x, cy_ - focal_ * c.z / c.x, c.x};
}

Vec3 CameraModel::BackProject(double u, double v, double depth) const {
  return position_ + RayDirection(u, v) * depth;
}

Vec3 CameraModel::RayDirection(double u, double v) const {
  return orientation_.Rotate({1.0, -(u - cx_) / focal_, -(v - cy_) / focal_});
}

double PitchToward(const Vec3& pivot, const Vec3& cam_pos, double offset_deg) {
  const double dz = pivot.z - cam_pos.z;
  const double planar = std::hypot(pivot.x - cam_pos.x, pivot.y - cam_pos.y);
  if (planar == 0.0 && dz == 0.0) {
    throw InvalidArgument("PitchToward: camera coincides with pivot");
  }
  return RadToDeg(std::atan2(dz, planar)) + offset_deg;
}

double BearingDeg(const Vec3& from, const Vec3& to) {
  return RadToDeg(std::atan2(to.y - from.y, to.x - from.x));
}

}  // namespace zebrasynth
