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
#include "zebrasynth/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "zebrasynth/error.h"
#include "zebrasynth/io_util.h"

namespace zebrasynth {

using nlohmann::json;

namespace {

// Boxes may poke past the image by this much before counting as out of
// bounds; covers YOLO's 6-decimal quantization.
constexpr double kBoundsSlackPx = 1e-2;

std::string Field(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string Index(const std::string& parent, size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw DataError(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(Field(where, key), "missing field");
  return *it;
}

int64_t RequireInt(const json& obj, const char* key, const std::string& where) {
  const json& v = Require(obj, key, where);
  if (!v.is_number_integer()) throw DataError(Field(where, key), "expected an integer");
  return v.get<int64_t>();
}

double RequireNumber(const json& v, const std::string& where) {
  if (!v.is_number()) throw DataError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw DataError(where, "non-finite number");
  return d;
}

std::string RequireString(const json& obj, const char* key, const std::string& where) {
  const json& v = Require(obj, key, where);
  if (!v.is_string()) throw DataError(Field(where, key), "expected a string");
  return v.get<std::string>();
}

const json& RequireArray(const json& obj, const char* key, const std::string& where) {
  const json& v = Require(obj, key, where);
  if (!v.is_array()) throw DataError(Field(where, key), "expected an array");
  return v;
}

json ParseJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

// Returns false when the box should be dropped.
bool CheckBounds(double& x, double& y, double& w, double& h, int width, int height,
                 const std::string& where, const ReadOptions& options,
                 std::vector<std::string>& warnings) {
  if (!(w > 0.0) || !(h > 0.0)) throw DataError(where, "box size must be positive");
  const double x1 = x + w, y1 = y + h;
  const bool outside = x < -kBoundsSlackPx || y < -kBoundsSlackPx ||
                       x1 > width + kBoundsSlackPx || y1 > height + kBoundsSlackPx;
  if (outside) {
    if (options.strict) throw DataError(where, "box outside the image bounds");
    warnings.push_back(where + ": box outside the image bounds, clamped");
  }
  const double cx0 = std::clamp(x, 0.0, static_cast<double>(width));
  const double cy0 = std::clamp(y, 0.0, static_cast<double>(height));
  const double cx1 = std::clamp(x1, 0.0, static_cast<double>(width));
  const double cy1 = std::clamp(y1, 0.0, static_cast<double>(height));
  if (cx0 == x && cy0 == y && cx1 == x1 && cy1 == y1) return true;
  if (!(cx1 > cx0) || !(cy1 > cy0)) {
    warnings.push_back(where + ": box has no area inside the image, dropped");
    return false;
  }
  x = cx0;
  y = cy0;
  w = cx1 - cx0;
  h = cy1 - cy0;
  return true;
}

std::map<int64_t, const ImageInfo*> IndexImages(std::span<const ImageInfo> images) {
  std::map<int64_t, const ImageInfo*> index;
  for (const ImageInfo& im : images) index[im.id] = &im;
  return index;
}

}  // namespace

// ---------------------------------------------------------------------------
// Manifest

const ImageRecord* DatasetManifest::FindImage(int64_t id) const {
  for (const ImageRecord& im : images) {
    if (im.id == id) return &im;
  }
  return nullptr;
}

json ManifestToJson(const DatasetManifest& m) {
  json images = json::array();
  for (const ImageRecord& im : m.images) {
    json j = {{"id", im.id}, {"file", im.file}, {"width", im.width}, {"height", im.height}};
    if (!im.split.empty()) j["split"] = im.split;
    if (!im.frame.is_null()) j["frame"] = im.frame;
    images.push_back(std::move(j));
  }
  json j = {{"name", m.name},
            {"seed", m.seed},
            {"config_digest", m.config_digest},
            {"images", images}};
  if (m.split_ratio) j["split_ratio"] = *m.split_ratio;
  return j;
}

DatasetManifest ManifestFromJson(const json& j) {
  DatasetManifest m;
  m.name = RequireString(j, "name", "");
  const json& seed = Require(j, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw DataError("seed", "expected an integer");
  }
  m.seed = seed.get<uint64_t>();
  m.config_digest = RequireString(j, "config_digest", "");
  if (j.contains("split_ratio")) {
    m.split_ratio = RequireNumber(j["split_ratio"], "split_ratio");
  }
  const json& images = RequireArray(j, "images", "");
  for (size_t i = 0; i < images.size(); ++i) {
    const std::string where = Index("images", i);
    ImageRecord im;
    im.id = RequireInt(images[i], "id", where);
    im.file = RequireString(images[i], "file", where);
    im.width = static_cast<int>(RequireInt(images[i], "width", where));
    im.height = static_cast<int>(RequireInt(images[i], "height", where));
    if (im.width <= 0 || im.height <= 0) throw DataError(where, "image size must be positive");
    if (images[i].contains("split")) im.split = RequireString(images[i], "split", where);
    if (images[i].contains("frame")) im.frame = images[i]["frame"];
    m.images.push_back(std::move(im));
  }
  return m;
}

void WriteManifest(const DatasetManifest& m, const std::filesystem::path& path) {
  WriteFileAtomic(path, ManifestToJson(m).dump(1) + "\n");
}

DatasetManifest ReadManifest(const std::filesystem::path& path) {
  try {
    return ManifestFromJson(ParseJsonFile(path));
  } catch (const DataError& e) {
    if (e.where() == path.string()) throw;
    throw DataError(path.string() + ": " + e.where(), e.detail());
  }
}

std::vector<Annotation> AnnotationsFromBoxes(int64_t image_id,
                                             std::span<const Box2D> boxes) {
  std::vector<Annotation> out;
  out.reserve(boxes.size());
  for (const Box2D& b : boxes) {
    Annotation a;
    a.image_id = image_id;
    a.x = b.x_min;
    a.y = b.y_min;
    a.w = b.Width();
    a.h = b.Height();
    a.instance_id = b.instance_id;
    out.push_back(a);
  }
  return out;
}

DatasetSplit SplitDataset(std::span<const int64_t> image_ids, double ratio, Rng& rng) {
  if (image_ids.empty()) throw InvalidArgument("SplitDataset: no images");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InvalidArgument("SplitDataset: ratio must be in (0, 1)");
  }
  std::vector<int64_t> ids(image_ids.begin(), image_ids.end());
  for (size_t i = ids.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.UniformInt(0, static_cast<int64_t>(i) - 1));
    std::swap(ids[i - 1], ids[j]);
  }
  const size_t n_train = static_cast<size_t>(std::llround(ratio * ids.size()));
  DatasetSplit s;
  s.train.assign(ids.begin(), ids.begin() + n_train);
  s.val.assign(ids.begin() + n_train, ids.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  return s;
}

void ApplySplit(DatasetManifest& m, const DatasetSplit& split, double ratio) {
  for (ImageRecord& im : m.images) {
    if (std::binary_search(split.train.begin(), split.train.end(), im.id)) {
      im.split = "train";
    } else if (std::binary_search(split.val.begin(), split.val.end(), im.id)) {
      im.split = "val";
    } else {
      im.split.clear();
    }
  }
  m.split_ratio = ratio;
}

// ---------------------------------------------------------------------------
// COCO

json CocoJson(std::span<const ImageRecord> images, std::span<const Annotation> annotations) {
  json jimages = json::array();
  for (const ImageRecord& im : images) {
    jimages.push_back(
        {{"id", im.id}, {"file_name", im.file}, {"width", im.width}, {"height", im.height}});
  }
  json jann = json::array();
  int64_t next_id = 1;
  for (const Annotation& a : annotations) {
    json j = {{"id", next_id++},
              {"image_id", a.image_id},
              {"category_id", a.category_id},
              {"bbox", json::array({a.x, a.y, a.w, a.h})},
              {"area", a.w * a.h},
              {"iscrowd", 0}};
    if (a.instance_id) j["instance_id"] = *a.instance_id;
    jann.push_back(std::move(j));
  }
  json categories = json::array(
      {{{"id", kZebraCategoryId}, {"name", kZebraCategoryName}, {"supercategory", "animal"}}});
  return {{"images", jimages}, {"annotations", jann}, {"categories", categories}};
}

void WriteCoco(const DatasetManifest& m, std::span<const Annotation> annotations,
               const std::filesystem::path& path) {
  WriteFileAtomic(path, CocoJson(m.images, annotations).dump(1) + "\n");
}

void WriteCocoSplit(const DatasetManifest& m, std::span<const Annotation> annotations,
                    const std::string& split, const std::filesystem::path& path) {
  std::vector<ImageRecord> images;
  std::vector<int64_t> ids;
  for (const ImageRecord& im : m.images) {
    if (im.split == split) {
      images.push_back(im);
      ids.push_back(im.id);
    }
  }
  std::sort(ids.begin(), ids.end());
  std::vector<Annotation> subset;
  for (const Annotation& a : annotations) {
    if (std::binary_search(ids.begin(), ids.end(), a.image_id)) subset.push_back(a);
  }
  WriteFileAtomic(path, CocoJson(images, subset).dump(1) + "\n");
}

void WriteCocoDetections(std::span<const Detection> detections,
                         const std::filesystem::path& path) {
  json arr = json::array();
  for (const Detection& d : detections) {
    arr.push_back({{"image_id", d.image_id},
                   {"category_id", kZebraCategoryId},
                   {"bbox", json::array({d.x, d.y, d.w, d.h})},
                   {"score", d.confidence}});
  }
  WriteFileAtomic(path, arr.dump(1) + "\n");
}

std::vector<ImageInfo> ImageInfos(const DatasetManifest& m) {
  std::vector<ImageInfo> out;
  out.reserve(m.images.size());
  for (const ImageRecord& im : m.images) out.push_back({im.id, im.file, im.width, im.height});
  return out;
}

namespace {

void ReadBbox(const json& entry, const std::string& where, double (&box)[4]) {
  const json& bbox = RequireArray(entry, "bbox", where);
  if (bbox.size() != 4) throw DataError(Field(where, "bbox"), "expected 4 numbers");
  for (size_t k = 0; k < 4; ++k) box[k] = RequireNumber(bbox[k], Index(Field(where, "bbox"), k));
}

void RequireZebraCategory(const json& entry, const std::string& where) {
  if (entry.contains("category_id") &&
      RequireInt(entry, "category_id", where) != kZebraCategoryId) {
    throw DataError(Field(where, "category_id"), "unknown category");
  }
}

}  // namespace

AnnotationSet ReadCoco(const std::filesystem::path& path, const ReadOptions& options) {
  const json j = ParseJsonFile(path);
  const std::string file = path.string();
  AnnotationSet out;
  const json& images = RequireArray(j, "images", file);
  for (size_t i = 0; i < images.size(); ++i) {
    const std::string where = file + ": " + Index("images", i);
    ImageInfo im;
    im.id = RequireInt(images[i], "id", where);
    im.file = RequireString(images[i], "file_name", where);
    im.width = static_cast<int>(RequireInt(images[i], "width", where));
    im.height = static_cast<int>(RequireInt(images[i], "height", where));
    if (im.width <= 0 || im.height <= 0) throw DataError(where, "image size must be positive");
    out.images.push_back(std::move(im));
  }
  const auto index = IndexImages(out.images);
  const json& anns = RequireArray(j, "annotations", file);
  for (size_t i = 0; i < anns.size(); ++i) {
    const std::string where = file + ": " + Index("annotations", i);
    Annotation a;
    a.image_id = RequireInt(anns[i], "image_id", where);
    RequireZebraCategory(anns[i], where);
    double box[4];
    ReadBbox(anns[i], where, box);
    a.x = box[0];
    a.y = box[1];
    a.w = box[2];
    a.h = box[3];
    if (anns[i].contains("instance_id")) {
      a.instance_id = static_cast<int>(RequireInt(anns[i], "instance_id", where));
    }
    const auto it = index.find(a.image_id);
    if (it == index.end()) throw DataError(Field(where, "image_id"), "unknown image");
    if (CheckBounds(a.x, a.y, a.w, a.h, it->second->width, it->second->height, where,
                    options, out.warnings)) {
      out.annotations.push_back(a);
    }
  }
  return out;
}

DetectionSet ReadCocoDetections(const std::filesystem::path& path,
                                std::span<const ImageInfo> images,
                                const ReadOptions& options) {
  const json j = ParseJsonFile(path);
  const std::string file = path.string();
  if (!j.is_array()) throw DataError(file, "expected a results array");
  const auto index = IndexImages(images);
  DetectionSet out;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string where = file + ": " + Index("", i);
    Detection d;
    d.image_id = RequireInt(j[i], "image_id", where);
    RequireZebraCategory(j[i], where);
    double box[4];
    ReadBbox(j[i], where, box);
    d.x = box[0];
    d.y = box[1];
    d.w = box[2];
    d.h = box[3];
    d.confidence = RequireNumber(Require(j[i], "score", where), Field(where, "score"));
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      throw DataError(Field(where, "score"), "confidence outside [0, 1]");
    }
    const auto it = index.find(d.image_id);
    if (it == index.end()) throw DataError(Field(where, "image_id"), "unknown image");
    if (CheckBounds(d.x, d.y, d.w, d.h, it->second->width, it->second->height, where,
                    options, out.warnings)) {
      out.detections.push_back(d);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// YOLO

std::string YoloLine(const Annotation& a, int width, int height) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "0 %.6f %.6f %.6f %.6f", (a.x + a.w / 2) / width,
                (a.y + a.h / 2) / height, a.w / width, a.h / height);
  return buf;
}

std::string YoloStem(const std::string& image_file) {
  return std::filesystem::path(image_file).stem().string();
}

namespace {

std::map<int64_t, std::string> GroupLines(std::span<const ImageInfo> images,
                                          std::span<const Annotation> annotations,
                                          std::span<const double> confidences) {
  const auto index = IndexImages(images);
  std::map<int64_t, std::string> text;
  for (size_t i = 0; i < annotations.size(); ++i) {
    const Annotation& a = annotations[i];
    const auto it = index.find(a.image_id);
    if (it == index.end()) {
      throw InvalidArgument("annotation for unknown image " + std::to_string(a.image_id));
    }
    std::string line = YoloLine(a, it->second->width, it->second->height);
    if (!confidences.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.6f", confidences[i]);
      line += buf;
    }
    text[a.image_id] += line + "\n";
  }
  return text;
}

void WriteYoloFiles(std::span<const ImageInfo> images,
                    const std::map<int64_t, std::string>& text,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const ImageInfo& im : images) {
    const auto it = text.find(im.id);
    WriteFileAtomic(dir / (YoloStem(im.file) + ".txt"),
                    it == text.end() ? std::string_view() : std::string_view(it->second));
  }
}

bool ParseDouble(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

struct YoloRow {
  double x, y, w, h;
  std::optional<double> confidence;
};

// Parses every row of every image's file; rows failing bounds are dropped.
template <typename Emit>
void ReadYoloDir(const std::filesystem::path& dir, std::span<const ImageInfo> images,
                 bool detections, const ReadOptions& options,
                 std::vector<std::string>& warnings, Emit emit) {
  for (const ImageInfo& im : images) {
    const std::filesystem::path path = dir / (YoloStem(im.file) + ".txt");
    if (!std::filesystem::exists(path)) continue;
    const std::string text = ReadFile(path);
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      const std::string where = path.string() + ":" + std::to_string(line_no);
      const auto fields = SplitFields(line);
      if (fields.empty()) continue;
      const size_t n = fields.size();
      if (n != 5 && !(detections && n == 6)) {
        throw DataError(where, "expected " + std::string(detections ? "5 or 6" : "5") +
                                   " fields, got " + std::to_string(n));
      }
      if (fields[0] != "0") throw DataError(where, "unknown class id");
      double v[6] = {0, 0, 0, 0, 0, 0};
      for (size_t k = 1; k < n; ++k) {
        if (!ParseDouble(fields[k], v[k])) {
          throw DataError(where, "field " + std::to_string(k + 1) + " is not a number");
        }
      }
      YoloRow row{(v[1] - v[3] / 2) * im.width, (v[2] - v[4] / 2) * im.height,
                  v[3] * im.width, v[4] * im.height, std::nullopt};
      if (n == 6) {
        if (v[5] < 0.0 || v[5] > 1.0) throw DataError(where, "confidence outside [0, 1]");
        row.confidence = v[5];
      }
      if (CheckBounds(row.x, row.y, row.w, row.h, im.width, im.height, where, options,
                      warnings)) {
        emit(im, row);
      }
    }
  }
}

}  // namespace

void WriteYolo(const DatasetManifest& m, std::span<const Annotation> annotations,
               const std::filesystem::path& dir) {
  const std::vector<ImageInfo> images = ImageInfos(m);
  WriteYoloFiles(images, GroupLines(images, annotations, {}), dir);
}

void WriteYoloDetections(std::span<const ImageInfo> images,
                         std::span<const Detection> detections,
                         const std::filesystem::path& dir) {
  std::vector<Annotation> boxes;
  std::vector<double> conf;
  for (const Detection& d : detections) {
    boxes.push_back({d.image_id, d.x, d.y, d.w, d.h, kZebraCategoryId, std::nullopt});
    conf.push_back(d.confidence);
  }
  WriteYoloFiles(images, GroupLines(images, boxes, conf), dir);
}

AnnotationSet ReadYolo(const std::filesystem::path& dir, std::span<const ImageInfo> images,
                       const ReadOptions& options) {
  AnnotationSet out;
  out.images.assign(images.begin(), images.end());
  ReadYoloDir(dir, images, false, options, out.warnings,
              [&](const ImageInfo& im, const YoloRow& r) {
                out.annotations.push_back(
                    {im.id, r.x, r.y, r.w, r.h, kZebraCategoryId, std::nullopt});
              });
  return out;
}

DetectionSet ReadYoloDetections(const std::filesystem::path& dir,
                                std::span<const ImageInfo> images,
                                const ReadOptions& options) {
  DetectionSet out;
  ReadYoloDir(dir, images, true, options, out.warnings,
              [&](const ImageInfo& im, const YoloRow& r) {
                out.detections.push_back(
                    {im.id, r.x, r.y, r.w, r.h, r.confidence.value_or(1.0)});
              });
  return out;
}

AnnotationFormat ParseAnnotationFormat(const std::string& name) {
  if (name == "coco") return AnnotationFormat::kCoco;
  if (name == "yolo") return AnnotationFormat::kYolo;
  throw InvalidArgument("unknown annotation format '" + name + "' (expected coco or yolo)");
}

}  // namespace zebrasynth
