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
#include "zebrasynth/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "zebrasynth/error.h"
#include "zebrasynth/io_util.h"

namespace zebrasynth {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// numpy.linspace(start, stop, num).
std::vector<double> Linspace(double start, double stop, int num) {
  std::vector<double> out(static_cast<size_t>(num));
  const double step = (stop - start) / (num - 1);
  for (int k = 0; k < num; ++k) out[static_cast<size_t>(k)] = k * step + start;
  out.back() = stop;
  return out;
}

}  // namespace

double Iou(const XywhBox& a, const XywhBox& b) {
  if (!(a.w > 0.0 && a.h > 0.0 && b.w > 0.0 && b.h > 0.0)) return 0.0;
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

ImageMatch MatchImage(std::span<const XywhBox> gts, std::span<const XywhBox> dets,
                      std::span<const double> confidences, double iou_threshold,
                      int max_detections) {
  if (confidences.size() != dets.size()) {
    throw InvalidArgument("MatchImage: one confidence per detection required");
  }
  ImageMatch m;
  m.order.resize(dets.size());
  std::iota(m.order.begin(), m.order.end(), 0);
  std::stable_sort(m.order.begin(), m.order.end(), [&](int a, int b) {
    return confidences[static_cast<size_t>(a)] > confidences[static_cast<size_t>(b)];
  });
  if (max_detections >= 0 && m.order.size() > static_cast<size_t>(max_detections)) {
    m.order.resize(static_cast<size_t>(max_detections));
  }
  std::vector<bool> taken(gts.size(), false);
  m.matched_gt.assign(m.order.size(), -1);
  for (size_t k = 0; k < m.order.size(); ++k) {
    const XywhBox& d = dets[static_cast<size_t>(m.order[k])];
    double best = -1.0;
    int best_g = -1;
    for (size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double iou = Iou(d, gts[g]);
      if (iou >= iou_threshold && iou > best) {
        best = iou;
        best_g = static_cast<int>(g);
      }
    }
    if (best_g >= 0) {
      taken[static_cast<size_t>(best_g)] = true;
      m.matched_gt[k] = best_g;
    }
  }
  return m;
}

namespace {

struct ImageGroup {
  std::vector<int> gt_indices;
  std::vector<int> det_indices;
  std::vector<XywhBox> gt_boxes;
  std::vector<XywhBox> det_boxes;
  std::vector<double> confidences;
};

std::map<int64_t, ImageGroup> GroupByImage(std::span<const Annotation> gts,
                                           std::span<const Detection> dets) {
  std::map<int64_t, ImageGroup> groups;
  for (size_t i = 0; i < gts.size(); ++i) {
    ImageGroup& g = groups[gts[i].image_id];
    g.gt_indices.push_back(static_cast<int>(i));
    g.gt_boxes.push_back(BoxOf(gts[i]));
  }
  for (size_t i = 0; i < dets.size(); ++i) {
    ImageGroup& g = groups[dets[i].image_id];
    g.det_indices.push_back(static_cast<int>(i));
    g.det_boxes.push_back(BoxOf(dets[i]));
    g.confidences.push_back(dets[i].confidence);
  }
  return groups;
}

MatchList MatchGroups(const std::map<int64_t, ImageGroup>& groups, double iou_threshold,
                      int max_detections) {
  MatchList out;
  for (const auto& [image_id, g] : groups) {
    out.n_gt += static_cast<int64_t>(g.gt_boxes.size());
    const ImageMatch m =
        MatchImage(g.gt_boxes, g.det_boxes, g.confidences, iou_threshold, max_detections);
    for (size_t k = 0; k < m.order.size(); ++k) {
      const size_t d = static_cast<size_t>(m.order[k]);
      ScoredMatch s;
      s.confidence = g.confidences[d];
      s.true_positive = m.matched_gt[k] >= 0;
      s.image_id = image_id;
      s.detection_index = g.det_indices[d];
      s.gt_index = s.true_positive ? g.gt_indices[static_cast<size_t>(m.matched_gt[k])] : -1;
      out.matches.push_back(s);
    }
  }
  std::stable_sort(out.matches.begin(), out.matches.end(),
                   [](const ScoredMatch& a, const ScoredMatch& b) {
                     return a.confidence > b.confidence;
                   });
  return out;
}

// Precision made non-increasing from the right, paired with recall.
void PrCurve(const std::vector<bool>& flags, int64_t n_gt, std::vector<double>& recall,
             std::vector<double>& precision) {
  recall.resize(flags.size());
  precision.resize(flags.size());
  double tp = 0.0, fp = 0.0;
  for (size_t i = 0; i < flags.size(); ++i) {
    (flags[i] ? tp : fp) += 1.0;
    recall[i] = tp / static_cast<double>(n_gt);
    precision[i] = tp / (tp + fp);
  }
  for (size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
}

std::vector<double> Interpolated101(const std::vector<bool>& flags, int64_t n_gt) {
  std::vector<double> out(101, 0.0);
  if (n_gt <= 0) return out;
  std::vector<double> recall, precision;
  PrCurve(flags, n_gt, recall, precision);
  const std::vector<double> thresholds = CocoRecallThresholds();
  for (size_t k = 0; k < thresholds.size(); ++k) {
    const auto it = std::lower_bound(recall.begin(), recall.end(), thresholds[k]);
    if (it != recall.end()) out[k] = precision[static_cast<size_t>(it - recall.begin())];
  }
  return out;
}

}  // namespace

MatchList MatchDetections(std::span<const Annotation> gts, std::span<const Detection> dets,
                          double iou_threshold, int max_detections) {
  return MatchGroups(GroupByImage(gts, dets), iou_threshold, max_detections);
}

const char* ApStyleName(ApStyle s) {
  return s == ApStyle::kCoco101 ? "coco101" : "voc_continuous";
}

ApStyle ParseApStyle(const std::string& name) {
  if (name == "coco101") return ApStyle::kCoco101;
  if (name == "voc_continuous") return ApStyle::kVocContinuous;
  throw InvalidArgument("unknown AP style '" + name +
                        "' (expected coco101 or voc_continuous)");
}

std::vector<double> CocoRecallThresholds() { return Linspace(0.0, 1.0, 101); }
std::vector<double> CocoIouThresholds() { return Linspace(0.5, 0.95, 10); }

double AveragePrecision(const std::vector<bool>& tp_flags, int64_t n_gt, ApStyle style) {
  if (n_gt < 0) throw InvalidArgument("AveragePrecision: negative ground-truth count");
  if (n_gt == 0) return tp_flags.empty() ? kNaN : 0.0;
  if (tp_flags.empty()) return 0.0;
  if (style == ApStyle::kCoco101) {
    const std::vector<double> q = Interpolated101(tp_flags, n_gt);
    return std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(q.size());
  }
  std::vector<double> recall, precision;
  PrCurve(tp_flags, n_gt, recall, precision);
  double area = 0.0, prev_recall = 0.0;
  for (size_t i = 0; i < recall.size(); ++i) {
    area += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return area;
}

double AveragePrecision(const MatchList& m, ApStyle style) {
  std::vector<bool> flags;
  flags.reserve(m.matches.size());
  for (const ScoredMatch& s : m.matches) flags.push_back(s.true_positive);
  return AveragePrecision(flags, m.n_gt, style);
}

ApResult EvaluateDataset(std::span<const Annotation> gts, std::span<const Detection> dets,
                         const EvalOptions& options) {
  const std::map<int64_t, ImageGroup> groups = GroupByImage(gts, dets);
  ApResult r;
  r.style = options.style;
  r.n_gt = static_cast<int64_t>(gts.size());
  r.n_detections = static_cast<int64_t>(dets.size());
  r.cardinality =
      options.cardinality > 0 ? options.cardinality : static_cast<int64_t>(groups.size());
  double sum = 0.0;
  for (double t : CocoIouThresholds()) {
    const MatchList m = MatchGroups(groups, t, options.max_detections);
    const double ap = AveragePrecision(m, options.style);
    r.ap_per_iou.push_back(ap);
    sum += ap;
    if (r.ap_per_iou.size() == 1) {
      std::vector<bool> flags;
      for (const ScoredMatch& s : m.matches) flags.push_back(s.true_positive);
      r.pr_precision = Interpolated101(flags, m.n_gt);
    }
  }
  r.ap50 = r.ap_per_iou.front();
  r.ap = sum / static_cast<double>(r.ap_per_iou.size());
  return r;
}

EvalReport Aggregate(std::span<const DatasetScore> datasets) {
  if (datasets.empty()) throw InvalidArgument("Aggregate: no datasets");
  EvalReport r;
  double w_sum = 0.0, w50 = 0.0, w = 0.0, s50 = 0.0, s = 0.0;
  int used = 0;
  for (const DatasetScore& d : datasets) {
    if (d.cardinality <= 0) {
      throw InvalidArgument("Aggregate: cardinality of '" + d.name + "' must be positive");
    }
    if (std::isnan(d.ap50) || std::isnan(d.ap)) continue;
    r.datasets.push_back(d);
    const double c = static_cast<double>(d.cardinality);
    w_sum += c;
    w50 += c * d.ap50;
    w += c * d.ap;
    s50 += d.ap50;
    s += d.ap;
    ++used;
  }
  if (used == 0) throw InvalidArgument("Aggregate: every dataset was skipped");
  r.weighted_ap50 = w50 / w_sum;
  r.weighted_ap = w / w_sum;
  r.simple_ap50 = s50 / used;
  r.simple_ap = s / used;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

json Number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double NumberOrNaN(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw DataError(where + ": " + key, "missing field");
  if (it->is_null()) return kNaN;
  if (!it->is_number()) throw DataError(where + ": " + key, "expected a number");
  return it->get<double>();
}

std::string Fixed3(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

json ApResultToJson(const ApResult& r) {
  json per_iou = json::array();
  for (double v : r.ap_per_iou) per_iou.push_back(Number(v));
  json pr = json::array();
  for (double v : r.pr_precision) pr.push_back(v);
  return {{"name", r.name},
          {"ap50", Number(r.ap50)},
          {"ap", Number(r.ap)},
          {"ap_per_iou", per_iou},
          {"iou_thresholds", CocoIouThresholds()},
          {"pr_curve", {{"recall", CocoRecallThresholds()}, {"precision", pr}}},
          {"cardinality", r.cardinality},
          {"n_gt", r.n_gt},
          {"n_detections", r.n_detections},
          {"style", ApStyleName(r.style)}};
}

DatasetScore ReadDatasetScore(const std::filesystem::path& path) {
  const std::string where = path.string();
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw DataError(where, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError(where, "expected an object");
  DatasetScore d;
  const auto name = j.find("name");
  if (name == j.end() || !name->is_string()) throw DataError(where + ": name", "expected a string");
  d.name = name->get<std::string>();
  d.ap50 = NumberOrNaN(j, "ap50", where);
  d.ap = NumberOrNaN(j, "ap", where);
  const auto card = j.find("cardinality");
  if (card == j.end() || !card->is_number_integer()) {
    throw DataError(where + ": cardinality", "expected an integer");
  }
  d.cardinality = card->get<int64_t>();
  return d;
}

json ReportToJson(const EvalReport& r) {
  json ds = json::array();
  for (const DatasetScore& d : r.datasets) {
    ds.push_back({{"name", d.name},
                  {"ap50", Number(d.ap50)},
                  {"ap", Number(d.ap)},
                  {"cardinality", d.cardinality}});
  }
  return {{"datasets", ds},
          {"weighted_avg", {{"ap50", r.weighted_ap50}, {"ap", r.weighted_ap}}},
          {"avg", {{"ap50", r.simple_ap50}, {"ap", r.simple_ap}}}};
}

std::string FormatReportTable(const EvalReport& r, const std::string& row_label) {
  struct Column {
    std::string title, ap50, ap;
  };
  std::vector<Column> cols;
  for (const DatasetScore& d : r.datasets) cols.push_back({d.name, Fixed3(d.ap50), Fixed3(d.ap)});
  cols.push_back({"Weighted avg", Fixed3(r.weighted_ap50), Fixed3(r.weighted_ap)});
  cols.push_back({"Avg", Fixed3(r.simple_ap50), Fixed3(r.simple_ap)});

  const size_t label_w = std::max<size_t>(row_label.size(), 5);
  std::string head = std::string(label_w, ' ');
  std::string sub = std::string(label_w, ' ');
  std::string row = row_label + std::string(label_w - row_label.size(), ' ');
  for (const Column& c : cols) {
    const size_t w = std::max<size_t>(c.title.size(), 13);
    const auto pad = [](const std::string& s, size_t width) {
      return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
    };
    head += " | " + pad(c.title, w);
    sub += " | " + pad(pad("mAP50", 7) + "mAP", w);
    row += " | " + pad(pad(c.ap50, 7) + c.ap, w);
  }
  const auto rstrip = [](std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  };
  return rstrip(head) + "\n" + rstrip(sub) + "\n" + rstrip(row) + "\n";
}

}  // namespace zebrasynth
