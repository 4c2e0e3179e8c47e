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
#include "zebrasynth/random.h"

#include "zebrasynth/error.h"

namespace zebrasynth {

int64_t Rng::UniformInt(int64_t lo, int64_t hi) {
  if (hi < lo) throw InvalidArgument("UniformInt: empty range");
  const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  if (span == UINT64_MAX) return static_cast<int64_t>(engine_());
  const uint64_t n = span + 1;
  // Rejection sampling on the largest multiple of n.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n) - 1;
  uint64_t draw;
  do {
    draw = engine_();
  } while (draw > limit);
  return lo + static_cast<int64_t>(draw % n);
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t master, std::string_view stream,
                    std::initializer_list<uint64_t> indices) {
  // FNV-1a over the stream name.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  uint64_t s = SplitMix64(master ^ SplitMix64(h));
  for (const uint64_t i : indices) s = SplitMix64(s ^ SplitMix64(i + 1));
  return s;
}

}  // namespace zebrasynth
