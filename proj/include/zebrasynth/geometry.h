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
// Vector/rotation math, oriented boxes and the pinhole camera.
//
// World frame is z-up, meters. A camera looks along +x of its own body frame,
// +y is to its left and +z is up. Image u grows to the right, v grows down.
#ifndef ZEBRASYNTH_GEOMETRY_H_
#define ZEBRASYNTH_GEOMETRY_H_

#include <array>
#include <cmath>
#include <optional>
#include <span>

namespace zebrasynth {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double DegToRad(double deg) { return deg * kPi / 180.0; }
inline constexpr double RadToDeg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double Dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 Cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double Norm(const Vec3& v) { return std::sqrt(Dot(v, v)); }
Vec3 Normalized(const Vec3& v);
inline bool IsFinite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Row-major 3x3 matrix; used for rotation matrices and covariances.
using Mat3 = std::array<std::array<double, 3>, 3>;

// Unit quaternion rotation.
class Rotation {
 public:
  // Identity.
  Rotation() = default;

  static Rotation FromQuaternion(double w, double x, double y, double z);
  static Rotation FromAxisAngle(const Vec3& axis, double angle_rad);
  // yaw about world z, pitch about the body lateral axis (negative = optical
  // axis tilted downward), roll about the optical axis. Degrees.
  // Equivalent to Rz(yaw) * Ry(-pitch) * Rx(roll).
  static Rotation FromRollPitchYaw(double roll_deg, double pitch_deg,
                                   double yaw_deg);
  // `m` must be a proper rotation matrix (orthonormal, det +1).
  static Rotation FromMatrix(const Mat3& m);

  Vec3 Rotate(const Vec3& v) const;
  Vec3 InverseRotate(const Vec3& v) const;
  Rotation Inverse() const { return FromRaw(w_, -x_, -y_, -z_); }
  Rotation operator*(const Rotation& o) const;

  Mat3 ToMatrix() const;
  // Column i of the rotation matrix: the image of the i-th basis vector.
  Vec3 Axis(int i) const;

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

 private:
  static Rotation FromRaw(double w, double x, double y, double z) {
    Rotation r;
    r.w_ = w;
    r.x_ = x;
    r.y_ = y;
    r.z_ = z;
    return r;
  }

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

struct Obb {
  Vec3 center;
  Vec3 half_extents;  // Along the local axes; all >= 0.
  Rotation orientation;

  Vec3 Axis(int i) const { return orientation.Axis(i); }
  double Volume() const {
    return 8.0 * half_extents.x * half_extents.y * half_extents.z;
  }
  std::array<Vec3, 8> Corners() const;
  // Closed-box containment with an absolute slack in meters.
  bool Contains(const Vec3& p, double slack = 0.0) const;
  // Axis-aligned bounds of the box: {min, max}.
  std::array<Vec3, 2> Aabb() const;
};

// Fits a box around the vertex cloud. Axes come from PCA of the cloud; each
// principal direction and world up are also tried as a box normal with a
// minimum-area rectangle in the orthogonal plane, and the smallest box wins.
// The result is relabeled so its orientation is closest to identity.
// Throws InvalidArgument on empty or non-finite input.
Obb ObbFromVertices(std::span<const Vec3> vertices);

// Exact separating-axis test for closed boxes (touching counts).
bool ObbIntersects(const Obb& a, const Obb& b);

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // Distance along the optical axis, meters.
};

class CameraModel {
 public:
  // Principal point defaults to the image center.
  CameraModel(const Vec3& position, const Rotation& orientation, int width,
              int height, double fov_horizontal_deg);
  CameraModel(const Vec3& position, const Rotation& orientation, int width,
              int height, double fov_horizontal_deg, double cx, double cy);

  const Vec3& position() const { return position_; }
  const Rotation& orientation() const { return orientation_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double fov_horizontal_deg() const { return fov_deg_; }
  double focal() const { return focal_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }

  Vec3 Forward() const { return orientation_.Axis(0); }

  // World point to camera body frame (x forward, y left, z up).
  Vec3 ToCamera(const Vec3& p) const {
    return orientation_.InverseRotate(p - position_);
  }
  // Empty when the point is at or behind the camera plane.
  std::optional<Projection> Project(const Vec3& p) const;
  // Inverse of Project for a given optical-axis depth.
  Vec3 BackProject(double u, double v, double depth) const;
  // World direction of the ray through pixel coordinate (u, v), scaled so its
  // component along the optical axis is 1.
  Vec3 RayDirection(double u, double v) const;

 private:
  Vec3 position_;
  Rotation orientation_;
  int width_;
  int height_;
  double fov_deg_;
  double focal_;
  double cx_;
  double cy_;
};

inline std::optional<Projection> ProjectPoint(const CameraModel& cam,
                                              const Vec3& p) {
  return cam.Project(p);
}

// atan2(pivot.z - cam.z, planar_distance) + 15, degrees. Throws
// InvalidArgument when the two points coincide.
double PitchToward(const Vec3& pivot, const Vec3& cam_pos,
                   double offset_deg = 15.0);

// Heading (degrees, atan2 convention about +z from +x) of the planar ray from
// `from` to `to`.
double BearingDeg(const Vec3& from, const Vec3& to);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_GEOMETRY_H_
