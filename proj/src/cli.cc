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
#include "zebrasynth/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zebrasynth/capture.h"
#include "zebrasynth/config.h"
#include "zebrasynth/dataset.h"
#include "zebrasynth/error.h"
#include "zebrasynth/evaluation.h"
#include "zebrasynth/groundtruth.h"
#include "zebrasynth/io_util.h"
#include "zebrasynth/random.h"

namespace zebrasynth {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GenerateOptions {
  std::string config;
  uint64_t seed = 0;
  std::string out;
  std::string strategy;
  bool dry_run = false;
  int jobs = 0;
};

struct ExportOptions {
  std::string in;
  std::string out;
  std::vector<std::string> formats{"coco", "yolo"};
  double split_ratio = 0.8;
  std::optional<uint64_t> seed;
};

struct EvaluateOptions {
  std::string gt;
  std::string pred;
  std::string format = "coco";
  std::string gt_format = "coco";
  std::string manifest;
  std::string style = "coco101";
  std::string name;
  std::string out;
  bool strict = false;
};

struct ReportOptions {
  std::vector<std::string> in;
  std::string label = "model";
  std::string out;
};

struct PreviewOptions {
  std::string config;
  uint64_t seed = 0;
  std::string out;
  int frames = 4;
  int width = 0;
  int height = 0;
};

fs::path ResolveOut(const std::string& out) {
  const char* root = std::getenv(kOutputRootEnv);
  if (out.empty()) {
    if (root && *root) return fs::path(root);
    throw InvalidArgument("--out is required (or set " + std::string(kOutputRootEnv) + ")");
  }
  const fs::path p(out);
  if (root && *root && p.is_relative()) return fs::path(root) / p;
  return p;
}

SceneConfig LoadConfigOrDefault(const std::string& path) {
  return path.empty() ? SceneConfig{} : LoadSceneConfig(path);
}

void LogProvenance(std::ostream& err, const char* command, uint64_t seed,
                   const std::string& digest) {
  err << command << ": seed=" << seed << " config_digest=" << digest << "\n";
}

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// failure.
template <typename Fn>
void ParallelFor(int n, int jobs, Fn fn) {
  const int workers = std::clamp(jobs, 1, std::max(n, 1));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------

int Generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  SceneConfig config = LoadConfigOrDefault(o.config);
  if (!o.strategy.empty() && o.strategy != "both") {
    config.generation.strategies = {ParseStrategy(o.strategy)};
  } else if (o.strategy == "both") {
    config.generation.strategies = {Strategy::kFar, Strategy::kNear};
  }
  ValidateConfig(config);
  const std::string digest = ConfigDigest(config);
  LogProvenance(err, "generate", o.seed, digest);

  if (o.dry_run) {
    const std::vector<GenerationRun> runs = RunGeneration(config, o.seed);
    json per_strategy = json::object();
    json per_env = json::object();
    size_t total = 0;
    for (const GenerationRun& r : runs) {
      const std::string s = StrategyName(r.strategy);
      const std::string e = std::to_string(r.environment);
      per_strategy[s] = per_strategy.value(s, 0) + static_cast<int>(r.frames.size());
      per_env[e] = per_env.value(e, 0) + static_cast<int>(r.frames.size());
      total += r.frames.size();
    }
    if (!o.out.empty() || std::getenv(kOutputRootEnv)) {
      const fs::path root = ResolveOut(o.out);
      json runs_json = json::array();
      for (const GenerationRun& r : runs) runs_json.push_back(RunToJson(r));
      WriteFileAtomic(root / "run.json",
                      json{{"seed", o.seed}, {"config_digest", digest}, {"runs", runs_json}}
                              .dump(1) + "\n");
    }
    out << json{{"frames", total},
                {"frames_per_strategy", per_strategy},
                {"frames_per_environment", per_env}}
               .dump()
        << "\n";
    return kExitOk;
  }

  const fs::path root = ResolveOut(o.out);
  fs::create_directories(root);
  SaveSceneConfig(config, (root / "config.json").string());
  const int jobs = o.jobs > 0 ? o.jobs
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  DatasetManifest manifest;
  manifest.name = "zebrasynth-" + std::to_string(o.seed);
  manifest.seed = o.seed;
  manifest.config_digest = digest;
  json runs_json = json::array();
  const auto catalog = std::make_shared<const AssetCatalog>(BuildCatalog(config.asset));
  for (int e = 0; e < config.generation.environments; ++e) {
    const Environment env = BuildEnvironment(config, e, catalog);
    for (Strategy s : config.generation.strategies) {
      const GenerationRun run = RunEnvironment(
          config, env, s, o.seed, [&](const Scene& scene, std::span<const FrameRecord> frames) {
            ParallelFor(static_cast<int>(frames.size()), jobs, [&](int i) {
              const FrameRecord& f = frames[static_cast<size_t>(i)];
              const FrameGroundTruth gt =
                  ComputeFrameGroundTruth(scene, f, config.camera, config.groundtruth);
              const RgbImage rgb =
                  RenderPreview(scene, gt.camera, f.time, config.groundtruth.near_clip);
              WriteFrameOutputs(gt, &rgb, root);
            });
          });
      for (const FrameRecord& f : run.frames) {
        ImageRecord im;
        im.id = static_cast<int64_t>(manifest.images.size()) + 1;
        im.file = "rgb/" + f.Name() + ".png";
        im.width = config.camera.width;
        im.height = config.camera.height;
        im.frame = FrameToJson(f);
        manifest.images.push_back(std::move(im));
      }
      runs_json.push_back(RunToJson(run));
    }
  }
  WriteManifest(manifest, root / "manifest.json");
  WriteFileAtomic(root / "run.json",
                  json{{"seed", o.seed}, {"config_digest", digest}, {"runs", runs_json}}.dump(1) +
                      "\n");
  out << json{{"frames", manifest.images.size()}, {"out", root.string()}}.dump() << "\n";
  return kExitOk;
}

// Boxes of every manifest image, read from gt/<stem>.json.
std::vector<Annotation> CollectAnnotations(const DatasetManifest& m, const fs::path& root) {
  std::vector<Annotation> anns;
  for (const ImageRecord& im : m.images) {
    const fs::path path = root / "gt" / (YoloStem(im.file) + ".json");
    json j;
    try {
      j = json::parse(ReadFile(path));
    } catch (const json::parse_error& e) {
      throw DataError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("boxes") || !j["boxes"].is_array()) {
      throw DataError(path.string() + ": boxes", "expected an array");
    }
    std::vector<Box2D> boxes;
    for (const json& b : j["boxes"]) {
      try {
        boxes.push_back({b.at("x_min").get<int>(), b.at("y_min").get<int>(),
                         b.at("x_max").get<int>(), b.at("y_max").get<int>(),
                         b.at("instance_id").get<int>(), b.at("pixel_count").get<int>()});
      } catch (const json::exception& e) {
        throw DataError(path.string() + ": boxes", e.what());
      }
    }
    const std::vector<Annotation> a = AnnotationsFromBoxes(im.id, boxes);
    anns.insert(anns.end(), a.begin(), a.end());
  }
  return anns;
}

int Export(const ExportOptions& o, std::ostream& out, std::ostream& err) {
  for (const std::string& f : o.formats) ParseAnnotationFormat(f);
  const fs::path in(o.in);
  DatasetManifest m = ReadManifest(in / "manifest.json");
  const uint64_t seed = o.seed.value_or(m.seed);
  LogProvenance(err, "export", seed, m.config_digest);
  const fs::path root = ResolveOut(o.out);
  if (m.images.empty()) throw DataError((in / "manifest.json").string(), "no images");

  std::vector<int64_t> ids;
  for (const ImageRecord& im : m.images) ids.push_back(im.id);
  Rng rng = StreamRng(seed, "split");
  const DatasetSplit split = SplitDataset(ids, o.split_ratio, rng);
  ApplySplit(m, split, o.split_ratio);
  const std::vector<Annotation> anns = CollectAnnotations(m, in);

  for (const std::string& f : o.formats) {
    if (ParseAnnotationFormat(f) == AnnotationFormat::kCoco) {
      WriteCoco(m, anns, root / "coco" / "annotations_all.json");
      WriteCocoSplit(m, anns, "train", root / "coco" / "annotations_train.json");
      WriteCocoSplit(m, anns, "val", root / "coco" / "annotations_val.json");
    } else {
      WriteYolo(m, anns, root / "yolo" / "labels");
      std::string train, val;
      for (const ImageRecord& im : m.images) {
        (im.split == "train" ? train : val) += (in / im.file).string() + "\n";
      }
      WriteFileAtomic(root / "yolo" / "train.txt", train);
      WriteFileAtomic(root / "yolo" / "val.txt", val);
    }
  }
  WriteManifest(m, root / "manifest.json");
  out << json{{"images", m.images.size()},
              {"annotations", anns.size()},
              {"train", split.train.size()},
              {"val", split.val.size()}}
             .dump()
      << "\n";
  return kExitOk;
}

int Evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
  const AnnotationFormat pred_format = ParseAnnotationFormat(o.format);
  const AnnotationFormat gt_format = ParseAnnotationFormat(o.gt_format);
  const ApStyle style = ParseApStyle(o.style);
  const ReadOptions ro{o.strict};

  AnnotationSet gts;
  if (gt_format == AnnotationFormat::kCoco) {
    gts = ReadCoco(o.gt, ro);
  } else {
    if (o.manifest.empty()) throw InvalidArgument("--gt-format yolo needs --manifest");
    gts = ReadYolo(o.gt, ImageInfos(ReadManifest(o.manifest)), ro);
  }
  DetectionSet dets = pred_format == AnnotationFormat::kCoco
                          ? ReadCocoDetections(o.pred, gts.images, ro)
                          : ReadYoloDetections(o.pred, gts.images, ro);
  for (const std::string& w : gts.warnings) err << "warning: " << w << "\n";
  for (const std::string& w : dets.warnings) err << "warning: " << w << "\n";

  EvalOptions eo;
  eo.style = style;
  eo.cardinality = static_cast<int64_t>(gts.images.size());
  ApResult r = EvaluateDataset(gts.annotations, dets.detections, eo);
  r.name = o.name.empty() ? fs::path(o.gt).stem().string() : o.name;
  if (!o.out.empty()) WriteFileAtomic(ResolveOut(o.out), ApResultToJson(r).dump(1) + "\n");
  out << "ap50=" << Fixed3(r.ap50) << " ap=" << Fixed3(r.ap) << " images=" << r.cardinality
      << " gt=" << r.n_gt << " detections=" << r.n_detections << "\n";
  return kExitOk;
}

int Report(const ReportOptions& o, std::ostream& out, std::ostream&) {
  std::vector<DatasetScore> scores;
  for (const std::string& path : o.in) scores.push_back(ReadDatasetScore(path));
  const EvalReport r = Aggregate(scores);
  if (!o.out.empty()) WriteFileAtomic(ResolveOut(o.out), ReportToJson(r).dump(1) + "\n");
  out << FormatReportTable(r, o.label);
  out << "weighted_ap50=" << Fixed3(r.weighted_ap50) << " weighted_ap=" << Fixed3(r.weighted_ap)
      << " avg_ap50=" << Fixed3(r.simple_ap50) << " avg_ap=" << Fixed3(r.simple_ap) << "\n";
  return kExitOk;
}

int Preview(const PreviewOptions& o, std::ostream& out, std::ostream& err) {
  SceneConfig config = LoadConfigOrDefault(o.config);
  if (o.width > 0) config.camera.width = o.width;
  if (o.height > 0) config.camera.height = o.height;
  ValidateConfig(config);
  LogProvenance(err, "preview", o.seed, ConfigDigest(config));
  const fs::path root = ResolveOut(o.out);

  const GenerationParams& g = config.generation;
  const int64_t per_run = static_cast<int64_t>(g.placements) * g.time_randomizations * g.cameras;
  const int64_t total = per_run * g.environments * static_cast<int64_t>(g.strategies.size());
  const int64_t n = std::min<int64_t>(o.frames, total);
  // Partial Fisher-Yates over global frame indices.
  std::vector<int64_t> picks;
  {
    Rng rng = StreamRng(o.seed, "preview");
    std::map<int64_t, int64_t> swapped;
    for (int64_t i = 0; i < n; ++i) {
      const int64_t j = rng.UniformInt(i, total - 1);
      const int64_t vi = swapped.count(i) ? swapped[i] : i;
      const int64_t vj = swapped.count(j) ? swapped[j] : j;
      swapped[j] = vi;
      picks.push_back(vj);
    }
    std::sort(picks.begin(), picks.end());
  }

  const auto catalog = std::make_shared<const AssetCatalog>(BuildCatalog(config.asset));
  json written = json::array();
  int64_t run_index = 0;
  for (int e = 0; e < g.environments; ++e) {
    const int64_t env_first = run_index * per_run;
    const int64_t env_last = (run_index + static_cast<int64_t>(g.strategies.size())) * per_run;
    const bool wanted = std::any_of(picks.begin(), picks.end(), [&](int64_t p) {
      return p >= env_first && p < env_last;
    });
    if (!wanted) {
      run_index += static_cast<int64_t>(g.strategies.size());
      continue;
    }
    const Environment env = BuildEnvironment(config, e, catalog);
    for (Strategy s : g.strategies) {
      const int64_t base = run_index++ * per_run;
      RunEnvironment(config, env, s, o.seed,
                     [&](const Scene& scene, std::span<const FrameRecord> frames) {
                       for (const FrameRecord& f : frames) {
                         if (!std::binary_search(picks.begin(), picks.end(), base + f.index)) {
                           continue;
                         }
                         const CameraModel cam = MakeCameraModel(f.pose, config.camera);
                         const fs::path path = root / (f.Name() + ".png");
                         WritePngRgb8(path.string(), RenderPreview(scene, cam, f.time,
                                                                   config.groundtruth.near_clip));
                         written.push_back(path.string());
                       }
                     });
    }
  }
  out << json{{"previews", written}}.dump() << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic zebra herd dataset generator and detection evaluator", "zebrasynth"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "Render frames and ground truth");
  generate->add_option("--config", gen.config, "Scene config JSON (defaults when omitted)");
  generate->add_option("--seed", gen.seed, "Master seed")->required();
  generate->add_option("--out", gen.out, "Output directory");
  generate->add_option("--strategy", gen.strategy, "far, near or both")
      ->check(CLI::IsMember({"far", "near", "both"}));
  generate->add_flag("--dry-run", gen.dry_run, "Sample frame records only, no rendering");
  generate->add_option("--jobs", gen.jobs, "Worker threads (default: all cores)")
      ->check(CLI::NonNegativeNumber);

  ExportOptions exp;
  CLI::App* export_cmd = app.add_subcommand("export", "Split and write COCO / YOLO labels");
  export_cmd->add_option("--in", exp.in, "Directory written by generate")
      ->required();
  export_cmd->add_option("--out", exp.out, "Output directory");
  export_cmd->add_option("--format", exp.formats, "coco and/or yolo")->delimiter(',');
  export_cmd->add_option("--split-ratio", exp.split_ratio, "Train fraction in (0, 1)");
  export_cmd->add_option("--seed", exp.seed, "Split seed (default: generation seed)");

  EvaluateOptions ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score detections against ground truth");
  evaluate->add_option("--gt", ev.gt, "Ground truth (COCO JSON, or YOLO dir)")->required();
  evaluate->add_option("--pred", ev.pred, "Detections (COCO results JSON or YOLO dir)")
      ->required();
  evaluate->add_option("--format", ev.format, "Detection format: coco or yolo");
  evaluate->add_option("--gt-format", ev.gt_format, "Ground-truth format: coco or yolo");
  evaluate->add_option("--manifest", ev.manifest, "Image list for YOLO ground truth");
  evaluate->add_option("--style", ev.style, "coco101 or voc_continuous");
  evaluate->add_option("--name", ev.name, "Dataset name in the result");
  evaluate->add_option("--out", ev.out, "Result JSON path");
  evaluate->add_flag("--strict", ev.strict, "Reject out-of-bounds boxes");

  ReportOptions rep;
  CLI::App* report = app.add_subcommand("report", "Aggregate several evaluation results");
  report->add_option("--in", rep.in, "Comma-separated evaluation result files")
      ->required()
      ->delimiter(',');
  report->add_option("--label", rep.label, "Row label of the table");
  report->add_option("--out", rep.out, "Report JSON path");

  PreviewOptions pre;
  CLI::App* preview = app.add_subcommand("preview", "Shaded PNGs of sampled frames");
  preview->add_option("--config", pre.config, "Scene config JSON");
  preview->add_option("--seed", pre.seed, "Master seed")->required();
  preview->add_option("--out", pre.out, "Output directory");
  preview->add_option("--frames", pre.frames, "Number of frames")->check(CLI::PositiveNumber);
  preview->add_option("--width", pre.width, "Override image width");
  preview->add_option("--height", pre.height, "Override image height");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return Generate(gen, out, err);
    if (export_cmd->parsed()) return Export(exp, out, err);
    if (evaluate->parsed()) return Evaluate(ev, out, err);
    if (report->parsed()) return Report(rep, out, err);
    if (preview->parsed()) return Preview(pre, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace zebrasynth
