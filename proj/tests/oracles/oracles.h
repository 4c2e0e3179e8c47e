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
// Reference implementations used only by tests. Each one takes a different
// route from the production code so agreement is meaningful.
#ifndef ZEBRASYNTH_TESTS_ORACLES_ORACLES_H_
#define ZEBRASYNTH_TESTS_ORACLES_ORACLES_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "zebrasynth/geometry.h"
#include "zebrasynth/scene.h"

namespace zebrasynth::oracle {

// Hand-rolled generator for property tests: xorshift64*.
class Gen {
 public:
  explicit Gen(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  uint64_t Next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545f4914f6cdd1dULL;
  }
  double Unit() { return static_cast<double>(Next() >> 11) / 9007199254740992.0; }
  double In(double lo, double hi) { return lo + (hi - lo) * Unit(); }
  int Int(int lo, int hi) { return lo + static_cast<int>(Next() % static_cast<uint64_t>(hi - lo + 1)); }

 private:
  uint64_t s_;
};

// Height from the four surrounding samples, written out cell by cell.
double BilinearHeight(const Terrain& t, double x, double y);

// Camera frame built from explicit trigonometric basis vectors.
struct TrigProjection {
  bool in_front = false;
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};
TrigProjection ProjectTrig(const Vec3& cam, double roll_deg, double pitch_deg,
                           double yaw_deg, int width, int height, double fov_deg,
                           const Vec3& p);

// Intersection by projecting all 8 corners of both boxes on 15 axes.
bool CornerSat(const Obb& a, const Obb& b);

// Point-sampling check: a grid of points of `a` tested against `b` and vice
// versa. Misses pairs whose overlap falls between samples.
bool SampledIntersect(const Obb& a, const Obb& b, int per_axis);

// Ray parameter t of the hit, Moller-Trumbore, two-sided.
std::optional<double> RayTriangle(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                  const Vec3& b, const Vec3& c);

struct RayHit {
  double t = 0.0;
  int id = -1;  // -1 when nothing was hit; 0 is terrain.
};

// Nearest hit with t >= min_t over the terrain mesh and every instance mesh,
// tested triangle by triangle. Earlier surfaces win exact ties.
RayHit CastScene(const Scene& scene, const Vec3& origin, const Vec3& dir, double min_t);

struct OBox {
  double x, y, w, h;
};

// Intersection-over-union by summing the overlap of the two intervals.
double IntervalIou(const OBox& a, const OBox& b);

struct ODet {
  int64_t image = 0;
  OBox box{};
  double score = 0.0;
};
struct OGt {
  int64_t image = 0;
  OBox box{};
};

// Greedy matching by repeated selection of the highest remaining score
// (earliest index on ties). result[d] is the matched gt index, -1 for a
// false positive, -2 when the detection was cut by max_dets.
std::vector<int> BruteMatch(const std::vector<OGt>& gts, const std::vector<ODet>& dets,
                            double threshold, int max_dets);

// Ranked flags for AP: detections ordered by score desc, ties by image id
// then per-image rank.
std::vector<bool> RankedFlags(const std::vector<OGt>& gts, const std::vector<ODet>& dets,
                              const std::vector<int>& match);

// AP by direct summation: for each recall threshold the best precision at
// any rank reaching it.
double Ap101Direct(const std::vector<bool>& flags, int64_t n_gt);
double ApContinuousDirect(const std::vector<bool>& flags, int64_t n_gt);

}  // namespace zebrasynth::oracle

#endif  // ZEBRASYNTH_TESTS_ORACLES_ORACLES_H_
