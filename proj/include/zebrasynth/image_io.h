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
// PNG encoding for the rendered modalities. Output is deterministic: no
// timestamps or text chunks are written.
#ifndef ZEBRASYNTH_IMAGE_IO_H_
#define ZEBRASYNTH_IMAGE_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zebrasynth/raster.h"

namespace zebrasynth {

struct Rgb8 {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  bool operator==(const Rgb8&) const = default;
};

using RgbImage = Grid<Rgb8>;

std::vector<uint8_t> EncodePngGray16(const Grid<uint16_t>& image);
std::vector<uint8_t> EncodePngRgb8(const RgbImage& image);
// Throws DataError on malformed input or an unexpected pixel format.
Grid<uint16_t> DecodePngGray16(std::span<const uint8_t> png);
RgbImage DecodePngRgb8(std::span<const uint8_t> png);

void WritePngGray16(const std::string& path, const Grid<uint16_t>& image);
void WritePngRgb8(const std::string& path, const RgbImage& image);
Grid<uint16_t> ReadPngGray16(const std::string& path);
RgbImage ReadPngRgb8(const std::string& path);

// Millimeters, rounded, clamped to [1, 65535]; background becomes 0.
Grid<uint16_t> DepthToMillimeters(const DepthMap& depth);
// Throws InvalidArgument if an id does not fit in 16 bits.
Grid<uint16_t> InstanceIdsTo16(const InstanceMap& ids);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_IMAGE_IO_H_
