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
// Detection metrics: IoU, greedy confidence-ordered matching, AP with COCO
// 101-point or continuous interpolation, and cardinality-weighted
// aggregation over several datasets.
#ifndef ZEBRASYNTH_EVALUATION_H_
#define ZEBRASYNTH_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zebrasynth/dataset.h"

namespace zebrasynth {

struct XywhBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

inline XywhBox BoxOf(const Annotation& a) { return {a.x, a.y, a.w, a.h}; }
inline XywhBox BoxOf(const Detection& d) { return {d.x, d.y, d.w, d.h}; }
inline XywhBox BoxOf(const Box2D& b) {
  return {static_cast<double>(b.x_min), static_cast<double>(b.y_min),
          static_cast<double>(b.Width()), static_cast<double>(b.Height())};
}

// 0 when either box has no area.
double Iou(const XywhBox& a, const XywhBox& b);

inline constexpr int kMaxDetectionsPerImage = 100;

// Matching inside one image. `order` lists detection indices by descending
// confidence (stable), truncated to max_detections; matched_gt[k] is the
// ground-truth index matched by order[k], or -1 for a false positive.
struct ImageMatch {
  std::vector<int> order;
  std::vector<int> matched_gt;
};

ImageMatch MatchImage(std::span<const XywhBox> gts, std::span<const XywhBox> dets,
                      std::span<const double> confidences, double iou_threshold,
                      int max_detections = kMaxDetectionsPerImage);

struct ScoredMatch {
  double confidence = 0.0;
  bool true_positive = false;
  int64_t image_id = 0;
  int detection_index = 0;  // Into the input detection list.
  int gt_index = -1;        // Into the input ground-truth list.
};

struct MatchList {
  // Every evaluated detection, stably sorted by descending confidence over
  // images visited in ascending id order.
  std::vector<ScoredMatch> matches;
  int64_t n_gt = 0;
};

MatchList MatchDetections(std::span<const Annotation> gts, std::span<const Detection> dets,
                          double iou_threshold,
                          int max_detections = kMaxDetectionsPerImage);

enum class ApStyle { kCoco101, kVocContinuous };
const char* ApStyleName(ApStyle s);
ApStyle ParseApStyle(const std::string& name);

// Recall thresholds 0, 0.01, ..., 1 computed the way numpy.linspace does.
std::vector<double> CocoRecallThresholds();
// IoU thresholds 0.50, 0.55, ..., 0.95, same construction.
std::vector<double> CocoIouThresholds();

// `tp_flags` in ranked order. NaN when n_gt == 0 and there are no flags;
// 0 when n_gt == 0 with detections.
double AveragePrecision(const std::vector<bool>& tp_flags, int64_t n_gt, ApStyle style);
double AveragePrecision(const MatchList& m, ApStyle style);

struct ApResult {
  std::string name;
  double ap50 = 0.0;
  double ap = 0.0;  // Mean over the ten IoU thresholds.
  std::vector<double> ap_per_iou;
  // Interpolated precision at the 101 recall thresholds, IoU 0.5.
  std::vector<double> pr_precision;
  int64_t cardinality = 0;  // Images in the dataset.
  int64_t n_gt = 0;
  int64_t n_detections = 0;
  ApStyle style = ApStyle::kCoco101;
};

struct EvalOptions {
  ApStyle style = ApStyle::kCoco101;
  int max_detections = kMaxDetectionsPerImage;
  // Number of images; when <= 0 the distinct ids over gts and dets are used.
  int64_t cardinality = 0;
};

ApResult EvaluateDataset(std::span<const Annotation> gts, std::span<const Detection> dets,
                         const EvalOptions& options = {});

struct DatasetScore {
  std::string name;
  double ap50 = 0.0;
  double ap = 0.0;
  int64_t cardinality = 0;
};

struct EvalReport {
  std::vector<DatasetScore> datasets;  // Input order; NaN entries skipped.
  double weighted_ap50 = 0.0;
  double weighted_ap = 0.0;
  double simple_ap50 = 0.0;
  double simple_ap = 0.0;
};

// Weighted by cardinality and plain means. Throws InvalidArgument on an
// empty list or a non-positive cardinality.
EvalReport Aggregate(std::span<const DatasetScore> datasets);

nlohmann::json ApResultToJson(const ApResult& r);
// Reads name, ap50, ap and cardinality from an evaluation result file.
DatasetScore ReadDatasetScore(const std::filesystem::path& path);
nlohmann::json ReportToJson(const EvalReport& r);
// One row per report in the column layout: per-dataset mAP50 / mAP pairs,
// then weighted and simple averages.
std::string FormatReportTable(const EvalReport& r, const std::string& row_label);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_EVALUATION_H_
