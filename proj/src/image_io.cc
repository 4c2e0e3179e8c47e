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
#include "zebrasynth/image_io.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>

#include "zebrasynth/error.h"
#include "zebrasynth/io_util.h"

namespace zebrasynth {
namespace {

struct ReadCursor {
  std::span<const uint8_t> bytes;
  size_t offset = 0;
};

void WriteToVector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void FlushNoop(png_structp) {}

void ReadFromSpan(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->bytes.size()) png_error(png, "truncated PNG");
  std::memcpy(data, cur->bytes.data() + cur->offset, length);
  cur->offset += length;
}

void SilentWarning(png_structp, png_const_charp) {}

// Rows are big-endian as PNG requires.
std::vector<uint8_t> Encode(int width, int height, int color_type, int bit_depth,
                            const std::vector<uint8_t>& rows_data) {
  std::vector<uint8_t> out;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, SilentWarning);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed");
  }
  png_set_write_fn(png, &out, WriteToVector, FlushNoop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const size_t stride = static_cast<size_t>(width) * channels * (bit_depth / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rows_data.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

struct Decoded {
  int width = 0;
  int height = 0;
  int color_type = 0;
  int bit_depth = 0;
  std::vector<uint8_t> data;
};

Decoded Decode(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw DataError("png", "not a PNG stream");
  }
  Decoded d;
  ReadCursor cursor{bytes, 0};
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, SilentWarning);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("png", "corrupt PNG stream");
  }
  png_set_read_fn(png, &cursor, ReadFromSpan);
  png_read_info(png, info);
  d.width = static_cast<int>(png_get_image_width(png, info));
  d.height = static_cast<int>(png_get_image_height(png, info));
  d.color_type = png_get_color_type(png, info);
  d.bit_depth = png_get_bit_depth(png, info);
  const size_t stride = png_get_rowbytes(png, info);
  d.data.resize(stride * static_cast<size_t>(d.height));
  for (int y = 0; y < d.height; ++y) {
    png_read_row(png, d.data.data() + static_cast<size_t>(y) * stride, nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return d;
}

}  // namespace

std::vector<uint8_t> EncodePngGray16(const Grid<uint16_t>& image) {
  std::vector<uint8_t> rows(image.size() * 2);
  for (size_t i = 0; i < image.size(); ++i) {
    rows[2 * i] = static_cast<uint8_t>(image.data()[i] >> 8);
    rows[2 * i + 1] = static_cast<uint8_t>(image.data()[i] & 0xff);
  }
  return Encode(image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 16, rows);
}

std::vector<uint8_t> EncodePngRgb8(const RgbImage& image) {
  std::vector<uint8_t> rows(image.size() * 3);
  for (size_t i = 0; i < image.size(); ++i) {
    rows[3 * i] = image.data()[i].r;
    rows[3 * i + 1] = image.data()[i].g;
    rows[3 * i + 2] = image.data()[i].b;
  }
  return Encode(image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, rows);
}

Grid<uint16_t> DecodePngGray16(std::span<const uint8_t> png) {
  const Decoded d = Decode(png);
  if (d.color_type != PNG_COLOR_TYPE_GRAY || d.bit_depth != 16) {
    throw DataError("png", "expected 16-bit grayscale");
  }
  Grid<uint16_t> out(d.width, d.height, 0);
  for (size_t i = 0; i < out.size(); ++i) {
    out.mutable_data()[i] =
        static_cast<uint16_t>((d.data[2 * i] << 8) | d.data[2 * i + 1]);
  }
  return out;
}

RgbImage DecodePngRgb8(std::span<const uint8_t> png) {
  const Decoded d = Decode(png);
  if (d.color_type != PNG_COLOR_TYPE_RGB || d.bit_depth != 8) {
    throw DataError("png", "expected 8-bit RGB");
  }
  RgbImage out(d.width, d.height, Rgb8{});
  for (size_t i = 0; i < out.size(); ++i) {
    out.mutable_data()[i] = {d.data[3 * i], d.data[3 * i + 1], d.data[3 * i + 2]};
  }
  return out;
}

void WritePngGray16(const std::string& path, const Grid<uint16_t>& image) {
  const std::vector<uint8_t> bytes = EncodePngGray16(image);
  WriteFileAtomic(path, std::span<const uint8_t>(bytes));
}

void WritePngRgb8(const std::string& path, const RgbImage& image) {
  const std::vector<uint8_t> bytes = EncodePngRgb8(image);
  WriteFileAtomic(path, std::span<const uint8_t>(bytes));
}

Grid<uint16_t> ReadPngGray16(const std::string& path) {
  const std::string s = ReadFile(path);
  return DecodePngGray16(
      std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

RgbImage ReadPngRgb8(const std::string& path) {
  const std::string s = ReadFile(path);
  return DecodePngRgb8(
      std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

Grid<uint16_t> DepthToMillimeters(const DepthMap& depth) {
  Grid<uint16_t> out(depth.width(), depth.height(), 0);
  for (size_t i = 0; i < depth.size(); ++i) {
    const double d = depth.data()[i];
    if (!std::isfinite(d)) continue;
    const double mm = std::clamp(std::round(d * 1000.0), 1.0, 65535.0);
    out.mutable_data()[i] = static_cast<uint16_t>(mm);
  }
  return out;
}

Grid<uint16_t> InstanceIdsTo16(const InstanceMap& ids) {
  Grid<uint16_t> out(ids.width(), ids.height(), 0);
  for (size_t i = 0; i < ids.size(); ++i) {
    const int32_t id = ids.data()[i];
    if (id < 0 || id > 65535) throw InvalidArgument("instance id exceeds 16 bits");
    out.mutable_data()[i] = static_cast<uint16_t>(id);
  }
  return out;
}

}  // namespace zebrasynth
