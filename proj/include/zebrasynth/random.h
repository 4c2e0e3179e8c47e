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
#ifndef ZEBRASYNTH_RANDOM_H_
#define ZEBRASYNTH_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace zebrasynth {

// Seeded generator with platform-independent draws. std::mt19937_64 output is
// fixed by the standard; the distribution adaptors are not, so the
// conversions live here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // [lo, hi). Returns lo when lo == hi.
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // Inclusive integer range, unbiased.
  int64_t UniformInt(int64_t lo, int64_t hi);
  bool Bernoulli(double p) { return Uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

uint64_t SplitMix64(uint64_t x);

// Independent sub-seed for a named stream and a tuple of indices, e.g.
// DeriveSeed(master, "camera", {env, placement, randomization, cam}).
uint64_t DeriveSeed(uint64_t master, std::string_view stream,
                    std::initializer_list<uint64_t> indices = {});

inline Rng StreamRng(uint64_t master, std::string_view stream,
                     std::initializer_list<uint64_t> indices = {}) {
  return Rng(DeriveSeed(master, stream, indices));
}

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_RANDOM_H_
