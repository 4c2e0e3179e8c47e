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
// Dataset assembly: manifest, train/validation split and COCO / YOLO
// annotation files.
#ifndef ZEBRASYNTH_DATASET_H_
#define ZEBRASYNTH_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zebrasynth/groundtruth.h"
#include "zebrasynth/random.h"

namespace zebrasynth {

inline constexpr int kZebraCategoryId = 1;
inline constexpr const char* kZebraCategoryName = "zebra";

// Boxes are absolute pixels: top-left corner plus size.
struct Annotation {
  int64_t image_id = 0;
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  int category_id = kZebraCategoryId;
  std::optional<int> instance_id;

  bool operator==(const Annotation&) const = default;
};

struct Detection {
  int64_t image_id = 0;
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  double confidence = 1.0;

  bool operator==(const Detection&) const = default;
};

struct ImageRecord {
  int64_t id = 0;
  std::string file;  // Relative to the dataset root.
  int width = 0;
  int height = 0;
  std::string split;        // "train", "val" or empty.
  nlohmann::json frame;     // Source frame metadata.
};

struct DatasetManifest {
  std::string name;
  std::vector<ImageRecord> images;
  uint64_t seed = 0;
  std::string config_digest;
  std::optional<double> split_ratio;

  const ImageRecord* FindImage(int64_t id) const;
};

nlohmann::json ManifestToJson(const DatasetManifest& m);
// Throws DataError naming the offending field.
DatasetManifest ManifestFromJson(const nlohmann::json& j);
void WriteManifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest ReadManifest(const std::filesystem::path& path);

// Annotations of one frame's boxes.
std::vector<Annotation> AnnotationsFromBoxes(int64_t image_id,
                                             std::span<const Box2D> boxes);

struct DatasetSplit {
  std::vector<int64_t> train;  // Ascending.
  std::vector<int64_t> val;    // Ascending.
};

// Shuffle, then the first round(ratio * N) ids go to train. Throws
// InvalidArgument on empty input or ratio outside (0, 1).
DatasetSplit SplitDataset(std::span<const int64_t> image_ids, double ratio, Rng& rng);
// Sets ImageRecord::split and split_ratio.
void ApplySplit(DatasetManifest& m, const DatasetSplit& split, double ratio);

// ---------------------------------------------------------------------------
// COCO

nlohmann::json CocoJson(std::span<const ImageRecord> images,
                        std::span<const Annotation> annotations);
void WriteCoco(const DatasetManifest& m, std::span<const Annotation> annotations,
               const std::filesystem::path& path);
// Subset of `m` whose split equals `split`.
void WriteCocoSplit(const DatasetManifest& m, std::span<const Annotation> annotations,
                    const std::string& split, const std::filesystem::path& path);
// COCO results array: image_id, category_id, bbox, score.
void WriteCocoDetections(std::span<const Detection> detections,
                         const std::filesystem::path& path);

struct ImageInfo {
  int64_t id = 0;
  std::string file;
  int width = 0;
  int height = 0;
};

std::vector<ImageInfo> ImageInfos(const DatasetManifest& m);

struct ReadOptions {
  // Out-of-bounds boxes raise DataError instead of being clamped.
  bool strict = false;
};

struct AnnotationSet {
  std::vector<ImageInfo> images;
  std::vector<Annotation> annotations;
  std::vector<std::string> warnings;
};

struct DetectionSet {
  std::vector<Detection> detections;
  std::vector<std::string> warnings;
};

AnnotationSet ReadCoco(const std::filesystem::path& path, const ReadOptions& options = {});
// `images` bounds the boxes; ids absent from it are an error.
DetectionSet ReadCocoDetections(const std::filesystem::path& path,
                                std::span<const ImageInfo> images,
                                const ReadOptions& options = {});

// ---------------------------------------------------------------------------
// YOLO: one <image stem>.txt per image, lines "0 cx cy w h" normalized to
// the image size with 6 decimals. Detection files carry a trailing
// confidence.

std::string YoloLine(const Annotation& a, int width, int height);
std::string YoloStem(const std::string& image_file);

void WriteYolo(const DatasetManifest& m, std::span<const Annotation> annotations,
               const std::filesystem::path& dir);
void WriteYoloDetections(std::span<const ImageInfo> images,
                         std::span<const Detection> detections,
                         const std::filesystem::path& dir);

// Missing files read as images without boxes.
AnnotationSet ReadYolo(const std::filesystem::path& dir, std::span<const ImageInfo> images,
                       const ReadOptions& options = {});
DetectionSet ReadYoloDetections(const std::filesystem::path& dir,
                                std::span<const ImageInfo> images,
                                const ReadOptions& options = {});

enum class AnnotationFormat { kCoco, kYolo };
// Throws InvalidArgument for anything but "coco" / "yolo".
AnnotationFormat ParseAnnotationFormat(const std::string& name);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_DATASET_H_
