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
#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "zebrasynth/error.h"

namespace zebrasynth {
namespace {

using oracle::Gen;

// Overlap of two boxes by counting cells of a 1/100 grid.
double GridIou(const XywhBox& a, const XywhBox& b, double lo, double hi) {
  const int n = static_cast<int>(std::lround((hi - lo) * 100));
  int64_t inter = 0, uni = 0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (i + 0.5) / 100;
    for (int j = 0; j < n; ++j) {
      const double y = lo + (j + 0.5) / 100;
      const bool in_a = x > a.x && x < a.x + a.w && y > a.y && y < a.y + a.h;
      const bool in_b = x > b.x && x < b.x + b.w && y > b.y && y < b.y + b.h;
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

TEST(IouTest, SpotValues) {
  EXPECT_EQ(Iou({0, 0, 2, 2}, {0, 0, 2, 2}), 1.0);
  EXPECT_EQ(Iou({0, 0, 2, 2}, {5, 5, 1, 1}), 0.0);
  EXPECT_EQ(Iou({0, 0, 2, 2}, {2, 0, 2, 2}), 0.0);
  EXPECT_EQ(Iou({0, 0, 0, 2}, {0, 0, 2, 2}), 0.0);
  const double grid = GridIou({0, 0, 2, 2}, {1, 1, 2, 2}, 0, 3);
  EXPECT_NEAR(grid, 1.0 / 7.0, 1e-12);
  EXPECT_NEAR(Iou({0, 0, 2, 2}, {1, 1, 2, 2}), grid, 1e-12);
}

TEST(IouTest, MatchesIntervalOracle) {
  Gen g(61);
  for (int i = 0; i < 10000; ++i) {
    const XywhBox a{g.In(-5, 5), g.In(-5, 5), g.In(0.01, 6), g.In(0.01, 6)};
    const XywhBox b{g.In(-5, 5), g.In(-5, 5), g.In(0.01, 6), g.In(0.01, 6)};
    const double v = Iou(a, b);
    ASSERT_NEAR(v, oracle::IntervalIou({a.x, a.y, a.w, a.h}, {b.x, b.y, b.w, b.h}), 1e-12);
    ASSERT_EQ(v, Iou(b, a));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(MatchImageTest, ProtocolExamples) {
  const std::vector<XywhBox> gt = {{0, 0, 10, 10}};
  const std::vector<XywhBox> one = {{0, 0, 10, 9}};
  const std::vector<double> c1 = {0.5};
  const ImageMatch m1 = MatchImage(gt, one, c1, 0.5);
  ASSERT_EQ(m1.matched_gt.size(), 1u);
  EXPECT_EQ(m1.matched_gt[0], 0);

  const std::vector<XywhBox> two = {{0, 0, 10, 10}, {0, 0, 10, 10}};
  const std::vector<double> c2 = {0.8, 0.9};
  const ImageMatch m2 = MatchImage(gt, two, c2, 0.5);
  EXPECT_EQ(m2.order, (std::vector<int>{1, 0}));
  EXPECT_EQ(m2.matched_gt, (std::vector<int>{0, -1}));
}

TEST(MatchImageTest, TiesAndTruncation) {
  // Equal IoU with two ground truths: the lower index wins.
  const std::vector<XywhBox> gts = {{0, 0, 4, 4}, {4, 0, 4, 4}};
  const std::vector<XywhBox> dets = {{2, 0, 4, 4}, {2, 0, 4, 4}, {2, 0, 4, 4}};
  const std::vector<double> conf = {0.7, 0.7, 0.7};
  const ImageMatch m = MatchImage(gts, dets, conf, 0.3);
  EXPECT_EQ(m.order, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(m.matched_gt, (std::vector<int>{0, 1, -1}));
  const ImageMatch cut = MatchImage(gts, dets, conf, 0.3, 2);
  EXPECT_EQ(cut.order.size(), 2u);
}

struct Instance {
  std::vector<Annotation> gts;
  std::vector<Detection> dets;
  std::vector<oracle::OGt> ogts;
  std::vector<oracle::ODet> odets;
};

// Up to 10 images with up to 20 boxes each. Coordinates on a coarse grid
// and scores in tenths so IoU and confidence ties are frequent.
Instance RandomInstance(Gen& g) {
  Instance in;
  const int images = g.Int(1, 10);
  for (int im = 1; im <= images; ++im) {
    const int n_gt = g.Int(0, 20), n_det = g.Int(0, 20);
    std::vector<Annotation> local;
    for (int k = 0; k < n_gt; ++k) {
      const Annotation a{im, static_cast<double>(g.Int(0, 20)), static_cast<double>(g.Int(0, 20)),
                         static_cast<double>(g.Int(1, 8)), static_cast<double>(g.Int(1, 8))};
      in.gts.push_back(a);
      local.push_back(a);
    }
    for (int k = 0; k < n_det; ++k) {
      Detection d{im, static_cast<double>(g.Int(0, 20)), static_cast<double>(g.Int(0, 20)),
                  static_cast<double>(g.Int(1, 8)), static_cast<double>(g.Int(1, 8)),
                  g.Int(0, 10) / 10.0};
      if (!local.empty() && g.Unit() < 0.6) {
        const Annotation& t = local[static_cast<size_t>(g.Int(0, static_cast<int>(local.size()) - 1))];
        d.x = t.x + g.Int(-1, 1);
        d.y = t.y + g.Int(-1, 1);
        d.w = t.w;
        d.h = t.h;
      }
      in.dets.push_back(d);
    }
  }
  // Shuffle the global lists so images are interleaved.
  for (size_t i = in.gts.size(); i > 1; --i) {
    std::swap(in.gts[i - 1], in.gts[static_cast<size_t>(g.Int(0, static_cast<int>(i) - 1))]);
  }
  for (size_t i = in.dets.size(); i > 1; --i) {
    std::swap(in.dets[i - 1], in.dets[static_cast<size_t>(g.Int(0, static_cast<int>(i) - 1))]);
  }
  for (const Annotation& a : in.gts) in.ogts.push_back({a.image_id, {a.x, a.y, a.w, a.h}});
  for (const Detection& d : in.dets) {
    in.odets.push_back({d.image_id, {d.x, d.y, d.w, d.h}, d.confidence});
  }
  return in;
}

TEST(OracleEquivalenceTest, MatchingAndApOverRandomInstances) {
  Gen g(62);
  int nontrivial = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Instance in = RandomInstance(g);
    for (double thr : {0.5, 0.75}) {
      const MatchList ml = MatchDetections(in.gts, in.dets, thr, 5);
      const std::vector<int> brute = oracle::BruteMatch(in.ogts, in.odets, thr, 5);
      std::vector<bool> flags;
      for (const ScoredMatch& s : ml.matches) {
        ASSERT_EQ(s.gt_index, brute[static_cast<size_t>(s.detection_index)]) << trial;
        ASSERT_EQ(s.true_positive, s.gt_index >= 0);
        flags.push_back(s.true_positive);
      }
      const std::vector<bool> want = oracle::RankedFlags(in.ogts, in.odets, brute);
      ASSERT_EQ(flags, want) << trial;
      ASSERT_EQ(ml.n_gt, static_cast<int64_t>(in.gts.size()));

      const double a101 = AveragePrecision(ml, ApStyle::kCoco101);
      const double o101 = oracle::Ap101Direct(want, ml.n_gt);
      const double acont = AveragePrecision(ml, ApStyle::kVocContinuous);
      const double ocont = oracle::ApContinuousDirect(want, ml.n_gt);
      if (std::isnan(o101)) {
        ASSERT_TRUE(std::isnan(a101));
        ASSERT_TRUE(std::isnan(acont));
        continue;
      }
      ASSERT_NEAR(a101, o101, 1e-9) << trial;
      ASSERT_NEAR(acont, ocont, 1e-9) << trial;
      nontrivial += o101 > 0 && o101 < 1;
    }
  }
  EXPECT_GT(nontrivial, 300);
}

TEST(ApTest, SmallCases) {
  for (ApStyle s : {ApStyle::kCoco101, ApStyle::kVocContinuous}) {
    EXPECT_DOUBLE_EQ(AveragePrecision({true}, 1, s), 1.0);
    EXPECT_DOUBLE_EQ(AveragePrecision({}, 3, s), 0.0);
    EXPECT_TRUE(std::isnan(AveragePrecision({}, 0, s)));
    EXPECT_DOUBLE_EQ(AveragePrecision({false, true}, 0, s), 0.0);
  }
  // One of two found at rank 1: recall 0.5 with precision 1.
  EXPECT_NEAR(AveragePrecision({true}, 2, ApStyle::kCoco101), 51.0 / 101.0, 1e-15);
  EXPECT_NEAR(AveragePrecision({true}, 2, ApStyle::kVocContinuous), 0.5, 1e-15);
  // FP then TP: precision 0.5 at full recall.
  EXPECT_NEAR(AveragePrecision({false, true}, 1, ApStyle::kCoco101), 0.5, 1e-15);
}

TEST(ApTest, ThresholdGrids) {
  const std::vector<double> r = CocoRecallThresholds();
  ASSERT_EQ(r.size(), 101u);
  EXPECT_EQ(r.front(), 0.0);
  EXPECT_EQ(r.back(), 1.0);
  EXPECT_EQ(r[7], 7 * 0.01);
  const std::vector<double> t = CocoIouThresholds();
  ASSERT_EQ(t.size(), 10u);
  EXPECT_EQ(t.front(), 0.5);
  EXPECT_EQ(t.back(), 0.95);
  EXPECT_EQ(ParseApStyle("coco101"), ApStyle::kCoco101);
  EXPECT_EQ(ParseApStyle(ApStyleName(ApStyle::kVocContinuous)), ApStyle::kVocContinuous);
  EXPECT_THROW(ParseApStyle("voc11"), InvalidArgument);
}

std::vector<Annotation> GridGts(int images) {
  std::vector<Annotation> gts;
  for (int im = 1; im <= images; ++im) {
    for (int k = 0; k < 4; ++k) gts.push_back({im, 20.0 * k, 10.0 * im, 10, 8});
  }
  return gts;
}

TEST(EvaluateDatasetTest, PerfectDetector) {
  const std::vector<Annotation> gts = GridGts(5);
  std::vector<Detection> dets;
  for (const Annotation& a : gts) dets.push_back({a.image_id, a.x, a.y, a.w, a.h, 1.0});
  const ApResult r = EvaluateDataset(gts, dets);
  EXPECT_DOUBLE_EQ(r.ap50, 1.0);
  EXPECT_DOUBLE_EQ(r.ap, 1.0);
  EXPECT_EQ(r.ap_per_iou.size(), 10u);
  EXPECT_EQ(r.n_gt, 20);
  EXPECT_EQ(r.n_detections, 20);
  EXPECT_EQ(r.cardinality, 5);
  EXPECT_EQ(r.pr_precision.size(), 101u);
}

TEST(EvaluateDatasetTest, AllWrongDetector) {
  const std::vector<Annotation> gts = GridGts(3);
  std::vector<Detection> dets;
  for (const Annotation& a : gts) dets.push_back({a.image_id, a.x + 100, a.y, a.w, a.h, 0.9});
  const ApResult r = EvaluateDataset(gts, dets);
  EXPECT_EQ(r.ap50, 0.0);
  EXPECT_EQ(r.ap, 0.0);
}

TEST(EvaluateDatasetTest, ShiftedBoxesPassOnlyTheLoosestThreshold) {
  // A 30% horizontal shift leaves IoU 0.7 / 1.3 = 0.538: matched at 0.50 only.
  const std::vector<Annotation> gts = GridGts(4);
  std::vector<Detection> dets;
  std::vector<oracle::OGt> ogts;
  std::vector<oracle::ODet> odets;
  double conf = 0.99;
  for (const Annotation& a : gts) {
    dets.push_back({a.image_id, a.x + 0.3 * a.w, a.y, a.w, a.h, conf});
    ogts.push_back({a.image_id, {a.x, a.y, a.w, a.h}});
    odets.push_back({a.image_id, {a.x + 0.3 * a.w, a.y, a.w, a.h}, conf});
    conf -= 0.01;
  }
  double oracle_sum = 0.0;
  for (double t : CocoIouThresholds()) {
    const std::vector<int> m = oracle::BruteMatch(ogts, odets, t, 100);
    oracle_sum += oracle::Ap101Direct(oracle::RankedFlags(ogts, odets, m),
                                      static_cast<int64_t>(ogts.size()));
  }
  const ApResult r = EvaluateDataset(gts, dets);
  EXPECT_NEAR(r.ap, oracle_sum / 10, 1e-12);
  EXPECT_DOUBLE_EQ(r.ap50, 1.0);
  EXPECT_NEAR(r.ap, 0.1, 1e-12);
  EXPECT_GT(r.ap50, r.ap);
}

TEST(EvaluateDatasetTest, AddingATruePositiveNeverLowersAp) {
  Gen g(63);
  for (int trial = 0; trial < 200; ++trial) {
    Instance in = RandomInstance(g);
    if (in.gts.empty()) continue;
    // Duplicate-free true positive: a ground truth no detection overlaps.
    Annotation extra{in.gts[0].image_id, 500, 500, 5, 5};
    in.gts.push_back(extra);
    const ApResult with_gt = EvaluateDataset(in.gts, in.dets);
    in.dets.push_back({extra.image_id, 500, 500, 5, 5, g.Int(0, 10) / 10.0});
    const ApResult after = EvaluateDataset(in.gts, in.dets);
    ASSERT_GE(after.ap50 + 1e-12, with_gt.ap50) << trial;
    ASSERT_GE(after.ap + 1e-12, with_gt.ap) << trial;
  }
}

TEST(EvaluateDatasetTest, ScaleInvariance) {
  Gen g(64);
  for (int trial = 0; trial < 100; ++trial) {
    Instance in = RandomInstance(g);
    const ApResult base = EvaluateDataset(in.gts, in.dets);
    for (Annotation& a : in.gts) a = {a.image_id, a.x * 4, a.y * 4, a.w * 4, a.h * 4};
    for (Detection& d : in.dets) d = {d.image_id, d.x * 4, d.y * 4, d.w * 4, d.h * 4, d.confidence};
    const ApResult scaled = EvaluateDataset(in.gts, in.dets);
    if (std::isnan(base.ap50)) {
      ASSERT_TRUE(std::isnan(scaled.ap50));
      continue;
    }
    ASSERT_EQ(base.ap50, scaled.ap50);
    ASSERT_EQ(base.ap, scaled.ap);
  }
}

TEST(EvaluateDatasetTest, ExplicitCardinality) {
  const std::vector<Annotation> gts = GridGts(2);
  EvalOptions o;
  o.cardinality = 50;
  EXPECT_EQ(EvaluateDataset(gts, {}, o).cardinality, 50);
  EXPECT_EQ(EvaluateDataset(gts, {}).ap50, 0.0);
}

const std::vector<int64_t> kCardinality = {1200, 19700, 19700, 23400, 23400, 8800, 8800, 185};

std::vector<DatasetScore> Row(const std::vector<double>& ap50, const std::vector<double>& ap) {
  std::vector<DatasetScore> out;
  for (size_t i = 0; i < ap50.size(); ++i) {
    out.push_back({"d" + std::to_string(i), ap50[i], ap[i], kCardinality[i]});
  }
  return out;
}

TEST(AggregateTest, ReferencePretrainedRow) {
  const EvalReport r =
      Aggregate(Row({0.879, 0.576, 0.529, 0.421, 0.379, 0.331, 0.551, 0.173},
                    {0.566, 0.376, 0.354, 0.274, 0.258, 0.215, 0.390, 0.123}));
  EXPECT_NEAR(r.weighted_ap50, 0.469, 0.005);
  EXPECT_NEAR(r.weighted_ap, 0.312, 0.005);
  EXPECT_NEAR(r.simple_ap50, 0.480, 0.005);
  EXPECT_NEAR(r.simple_ap, 0.320, 0.005);
  // Exact sums of the rounded inputs.
  EXPECT_NEAR(r.weighted_ap50, 49336.905 / 105185.0, 1e-12);
  EXPECT_NEAR(r.simple_ap50, 3.839 / 8.0, 1e-12);
}

TEST(AggregateTest, ReferenceSc1920Row) {
  const EvalReport r =
      Aggregate(Row({0.150, 0.907, 0.971, 0.939, 0.968, 0.649, 0.819, 0.331},
                    {0.053, 0.605, 0.664, 0.593, 0.652, 0.476, 0.580, 0.228}));
  EXPECT_NEAR(r.weighted_ap50, 0.901, 0.005);
  EXPECT_NEAR(r.weighted_ap, 0.604, 0.005);
  EXPECT_NEAR(r.simple_ap50, 0.717, 0.005);
  EXPECT_NEAR(r.simple_ap, 0.481, 0.005);
}

TEST(AggregateTest, EqualWeightsSingleAndEmpty) {
  std::vector<DatasetScore> eq = {{"a", 0.2, 0.1, 10}, {"b", 0.6, 0.3, 10}};
  const EvalReport r = Aggregate(eq);
  EXPECT_DOUBLE_EQ(r.weighted_ap50, r.simple_ap50);
  EXPECT_DOUBLE_EQ(r.weighted_ap, r.simple_ap);
  const std::vector<DatasetScore> one = {{"a", 0.7, 0.4, 3}};
  const EvalReport s = Aggregate(one);
  EXPECT_DOUBLE_EQ(s.weighted_ap50, 0.7);
  EXPECT_DOUBLE_EQ(s.simple_ap, 0.4);
  EXPECT_THROW(Aggregate(std::vector<DatasetScore>{}), InvalidArgument);
  const std::vector<DatasetScore> bad = {{"a", 0.7, 0.4, 0}};
  EXPECT_THROW(Aggregate(bad), InvalidArgument);
}

TEST(AggregateTest, SkipsUndefinedScores) {
  const std::vector<DatasetScore> v = {{"a", 0.5, 0.25, 10}, {"b", std::nan(""), std::nan(""), 90}};
  const EvalReport r = Aggregate(v);
  EXPECT_DOUBLE_EQ(r.weighted_ap50, 0.5);
  EXPECT_EQ(r.datasets.size(), 1u);
}

TEST(AggregateTest, PermutationInvariantAndBounded) {
  Gen g(65);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<DatasetScore> v;
    const int n = g.Int(1, 9);
    for (int i = 0; i < n; ++i) v.push_back({"x", g.Unit(), g.Unit(), g.Int(1, 30000)});
    const EvalReport a = Aggregate(v);
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<size_t>(g.Int(0, static_cast<int>(i) - 1))]);
    }
    const EvalReport b = Aggregate(v);
    ASSERT_NEAR(a.weighted_ap50, b.weighted_ap50, 1e-12);
    ASSERT_NEAR(a.simple_ap, b.simple_ap, 1e-12);
    double lo = 1, hi = 0;
    for (const DatasetScore& d : v) {
      lo = std::min(lo, d.ap50);
      hi = std::max(hi, d.ap50);
    }
    ASSERT_GE(a.weighted_ap50, lo - 1e-12);
    ASSERT_LE(a.weighted_ap50, hi + 1e-12);
    ASSERT_GE(a.simple_ap50, lo - 1e-12);
    ASSERT_LE(a.simple_ap50, hi + 1e-12);
  }
}

TEST(ReportTest, TableAndScoreFiles) {
  const std::filesystem::path fixtures = ZEBRASYNTH_FIXTURE_DIR;
  std::vector<DatasetScore> scores;
  for (const char* f : {"apt36k", "r1_d1", "r1_d2", "r2_d1", "r2_d2", "r3_d1", "r3_d2", "rp_val"}) {
    scores.push_back(ReadDatasetScore(fixtures / "scores" / "pretrained_coco" /
                                      (std::string(f) + ".json")));
  }
  EXPECT_EQ(scores[0].name, "APT-36K");
  EXPECT_EQ(scores[7].cardinality, 185);
  const EvalReport r = Aggregate(scores);
  const std::string table = FormatReportTable(r, "Pretrained-COCO");
  EXPECT_NE(table.find("Pretrained-COCO"), std::string::npos);
  EXPECT_NE(table.find("0.469"), std::string::npos);
  EXPECT_NE(table.find("0.480"), std::string::npos);
  const nlohmann::json j = ReportToJson(r);
  EXPECT_NEAR(j["weighted_avg"]["ap50"].get<double>(), 0.469, 0.0005);
}

}  // namespace
}  // namespace zebrasynth
