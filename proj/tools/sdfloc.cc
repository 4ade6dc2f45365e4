#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sdfloc/descriptor.h"
#include "sdfloc/esdf.h"
#include "sdfloc/io.h"
#include "sdfloc/pipeline.h"
#include "sdfloc/scene_synthesis.h"
#include "sdfloc/tsdf_integrator.h"

namespace fs = std::filesystem;
using namespace sdfloc;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<double> k_dist;
  std::optional<uint64_t> iters;
  std::optional<uint64_t> seed;
  std::optional<int> knn;
  std::optional<double> k_overlap;
  std::optional<int> max_keypoints;
  std::string sweep;
  int threads = 1;
};

void AddCommon(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_path, "key = value configuration file");
  app->add_option("--set", o.overrides, "config override key=value (repeatable)");
  app->add_option("--k-dist", o.k_dist, "RANSAC inlier distance, meters");
  app->add_option("--iters", o.iters, "RANSAC iterations");
  app->add_option("--seed", o.seed, "RANSAC seed");
  app->add_option("--knn", o.knn, "descriptor neighbours per query");
  app->add_option("--k-overlap", o.k_overlap, "minimum overlap fraction");
  app->add_option("--max-keypoints", o.max_keypoints, "keypoints kept per submap");
  app->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

void AddSweep(CLI::App* app, CommonOptions& o) {
  app->add_option("--fitness-sweep", o.sweep, "explicit threshold sweep lo:hi:n");
}

PipelineConfig MakeConfig(const CommonOptions& o, std::optional<double> match_volume) {
  PipelineConfig cfg;
  if (match_volume) cfg.match_volume = *match_volume;
  if (!o.config_path.empty()) {
    const PipelineConfig file = PipelineConfig::ReadFile(o.config_path);
    // Keep a scene-provided match volume unless the file sets one.
    const double mv = cfg.match_volume;
    cfg = file;
    std::ifstream in(o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str().find("match_volume") == std::string::npos) cfg.match_volume = mv;
  }
  for (const std::string& kv : o.overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "--set expects key=value");
    }
    cfg.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.k_dist) cfg.k_dist = *o.k_dist;
  if (o.iters) cfg.ransac_iterations = *o.iters;
  if (o.seed) cfg.seed = *o.seed;
  if (o.knn) cfg.knn = *o.knn;
  if (o.k_overlap) cfg.k_overlap = *o.k_overlap;
  if (o.max_keypoints) cfg.max_keypoints = *o.max_keypoints;
  cfg.Validate();
  return cfg;
}

std::optional<FitnessSweep> SweepOf(const CommonOptions& o) {
  if (o.sweep.empty()) return std::nullopt;
  return FitnessSweep::Parse(o.sweep);
}

struct Collection {
  std::vector<SdfSubmap> submaps;
  std::optional<double> match_volume;
};

Collection LoadCollection(const std::string& scene, const std::vector<std::string>& archives,
                          int threads) {
  Collection c;
  if (!scene.empty()) {
    const ScenePlan plan = ReadScenePlan(scene);
    c.submaps = CarveSubmaps(plan, threads);
    c.match_volume = plan.match_volume;
  }
  for (size_t i = 0; i < archives.size(); ++i) {
    c.submaps.push_back(
        ReadSubmapArchive(fs::path(archives[i]), static_cast<int>(c.submaps.size())));
  }
  return c;
}

int RunBuild(const std::vector<std::string>& clouds, const std::vector<double>& origin,
             double voxel_size, double truncation, double max_distance, int id,
             const std::string& out) {
  if (origin.size() != 3) throw Error(ErrorCode::kInvalidArgument, "--origin needs 3 values");
  if (truncation <= 0.0) truncation = 3.0 * voxel_size;
  if (max_distance <= 0.0) max_distance = 15.0 * voxel_size;
  SdfSubmap tsdf(id, voxel_size, truncation);
  const Vec3 o(origin[0], origin[1], origin[2]);
  size_t points = 0;
  for (const std::string& path : clouds) {
    const std::vector<Vec3> cloud = ReadPointcloud(path);
    points += IntegratePointcloud(tsdf, o, cloud).integrated_points;
  }
  const SdfSubmap esdf = ComputeEsdf(tsdf, max_distance);
  WriteSubmapArchive(esdf, fs::path(out));
  std::cout << "integrated " << points << " points into " << esdf.size() << " voxels -> "
            << out << "\n";
  return 0;
}

int RunSynth(const std::string& scene, const std::string& out_dir, int threads) {
  const ScenePlan plan = ReadScenePlan(scene);
  const std::vector<SdfSubmap> submaps = CarveSubmaps(plan, threads);
  fs::create_directories(out_dir);
  std::ostringstream gt;
  gt << "a,b,overlap_volume,is_match\n";
  for (size_t i = 0; i < submaps.size(); ++i) {
    WriteSubmapArchive(submaps[i], fs::path(out_dir) / (plan.viewpoints[i].name + ".fsdf"));
    for (size_t j = i + 1; j < submaps.size(); ++j) {
      const double v =
          OverlapVolume(submaps[i], submaps[j], RelativeTransform(submaps[i], submaps[j]));
      gt << i << ',' << j << ',' << FormatDouble(v) << ','
         << (v > plan.match_volume ? 1 : 0) << '\n';
    }
  }
  WriteTextFile(fs::path(out_dir) / "ground_truth.csv", gt.str());
  std::cout << "wrote " << submaps.size() << " submaps to " << out_dir << "\n";
  return 0;
}

int RunFeatures(const std::string& archive, const std::string& out_dir,
                const CommonOptions& o) {
  const PipelineConfig cfg = MakeConfig(o, std::nullopt);
  PreparedSubmap p;
  p.submap = ReadSubmapArchive(fs::path(archive));
  p.features = ExtractFeatures(p.submap, cfg, o.threads);
  fs::create_directories(out_dir);
  WriteTextFile(fs::path(out_dir) / "keypoints.csv", KeypointsCsv({p}));
  WriteTextFile(fs::path(out_dir) / "lrfs.csv", LrfDump(p.features));
  WriteDescriptorDump(p.features.descriptors, cfg.n_div,
                      fs::path(out_dir) / "descriptors.bin");
  std::cout << p.features.keypoints.size() << " keypoints, "
            << p.features.descriptors.size() << " descriptors ("
            << p.features.skipped_insufficient << " insufficient support, "
            << p.features.skipped_degenerate << " degenerate)\n";
  return 0;
}

int RunMatch(const std::string& query, const std::string& target, const std::string& out,
             const CommonOptions& o) {
  const PipelineConfig cfg = MakeConfig(o, std::nullopt);
  const std::vector<PreparedSubmap> pair = PrepareCollection(
      {ReadSubmapArchive(fs::path(query), 0), ReadSubmapArchive(fs::path(target), 1)}, cfg,
      o.threads);
  PairRecord rec;
  rec.result = MatchPair(pair[0], pair[1], cfg, o.threads);
  const RigidTransform truth = RelativeTransform(pair[0].submap, pair[1].submap);
  rec.overlap_volume = OverlapVolume(pair[0].submap, pair[1].submap, truth);
  rec.ground_truth_match = rec.overlap_volume > cfg.match_volume;
  if (rec.result.decision != Decision::kNoCandidate) {
    rec.translation_error = rec.result.target_from_query.TranslationDistanceTo(truth);
    rec.rotation_error_deg =
        rec.result.target_from_query.RotationAngleTo(truth) * 180.0 / 3.141592653589793;
  }
  const std::string csv = PairsCsv({rec});
  if (!out.empty()) WriteTextFile(out, csv);
  std::cout << csv;
  return 0;
}

int RunEvaluate(const std::string& scene, const std::vector<std::string>& archives,
                const std::string& out_dir, const CommonOptions& o) {
  const Collection c = LoadCollection(scene, archives, o.threads);
  const PipelineConfig cfg = MakeConfig(o, c.match_volume);
  const std::vector<PreparedSubmap> prepared = PrepareCollection(c.submaps, cfg, o.threads);
  const EvaluationReport report = EvaluateCollection(prepared, cfg, o.threads, SweepOf(o));
  fs::create_directories(out_dir);
  WriteTextFile(fs::path(out_dir) / "pairs.csv", PairsCsv(report.pairs));
  WriteTextFile(fs::path(out_dir) / "pr.csv", PrCsv(report.pr));
  WriteTextFile(fs::path(out_dir) / "keypoints.csv", KeypointsCsv(prepared));
  WriteTextFile(fs::path(out_dir) / "config.txt", cfg.Serialize());
  std::cout << report.pairs.size() << " pairs, area under PR " << FormatDouble(report.auc)
            << "\n";
  return 0;
}

int RunAblate(const std::string& scene, const std::vector<std::string>& archives,
              const std::vector<double>& d_lims, const std::string& out_dir,
              const CommonOptions& o) {
  const Collection c = LoadCollection(scene, archives, o.threads);
  const PipelineConfig cfg = MakeConfig(o, c.match_volume);
  const std::vector<double> limits = d_lims.empty() ? DefaultAblationLimits() : d_lims;
  const std::vector<AblationRow> rows =
      AblateFreespace(c.submaps, cfg, limits, o.threads, SweepOf(o));
  fs::create_directories(out_dir);
  for (const AblationRow& r : rows) {
    const std::string tag = "dlim_" + FormatDouble(r.d_lim);
    WriteTextFile(fs::path(out_dir) / ("pairs_" + tag + ".csv"), PairsCsv(r.report.pairs));
    WriteTextFile(fs::path(out_dir) / ("pr_" + tag + ".csv"), PrCsv(r.report.pr));
  }
  const std::string summary = AblationCsv(rows);
  WriteTextFile(fs::path(out_dir) / "ablation.csv", summary);
  std::cout << summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SDF-native place recognition"};
  app.require_subcommand(1);

  std::vector<std::string> clouds;
  std::vector<double> origin{0, 0, 0};
  double voxel_size = 0.05, truncation = 0.0, max_distance = 0.0;
  int build_id = 0;
  std::string build_out;
  CLI::App* build = app.add_subcommand("build", "fuse pointclouds into an SDF submap archive");
  build->add_option("--cloud", clouds, "pointcloud (.ply or xyz text)")->required();
  build->add_option("--origin", origin, "sensor origin x y z")->expected(3);
  build->add_option("--voxel-size", voxel_size)->check(CLI::PositiveNumber);
  build->add_option("--truncation", truncation, "default 3 voxels");
  build->add_option("--max-distance", max_distance, "ESDF range, default 15 voxels");
  build->add_option("--id", build_id);
  build->add_option("-o,--out", build_out)->required();

  std::string scene, out_dir = "out";
  int synth_threads = 1;
  CLI::App* synth = app.add_subcommand("synth", "carve submaps from a scene file");
  synth->add_option("scene", scene)->required();
  synth->add_option("-o,--out-dir", out_dir);
  synth->add_option("--threads", synth_threads);

  CommonOptions fo;
  std::string archive;
  CLI::App* features = app.add_subcommand("features", "extract keypoints and descriptors");
  features->add_option("archive", archive)->required();
  features->add_option("-o,--out-dir", out_dir);
  AddCommon(features, fo);

  CommonOptions mo;
  std::string query, target, match_out;
  CLI::App* match = app.add_subcommand("match", "match two submap archives");
  match->add_option("query", query)->required();
  match->add_option("target", target)->required();
  match->add_option("-o,--out", match_out, "pairs.csv path");
  AddCommon(match, mo);

  CommonOptions eo;
  std::vector<std::string> archives;
  CLI::App* evaluate = app.add_subcommand("evaluate", "pairwise evaluation with PR curve");
  evaluate->add_option("--scene", scene, "scene file to carve");
  evaluate->add_option("archives", archives, "submap archives with ground-truth poses");
  evaluate->add_option("-o,--out-dir", out_dir);
  AddCommon(evaluate, eo);
  AddSweep(evaluate, eo);

  CommonOptions ao;
  std::vector<double> d_lims;
  CLI::App* ablate = app.add_subcommand("ablate", "free-space keypoint ablation");
  ablate->add_option("--scene", scene, "scene file to carve");
  ablate->add_option("archives", archives, "submap archives with ground-truth poses");
  ablate->add_option("--d-lim", d_lims, "surface distance limits, meters")->delimiter(',');
  ablate->add_option("-o,--out-dir", out_dir);
  AddCommon(ablate, ao);
  AddSweep(ablate, ao);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorCode::kInvalidArgument);
  }

  try {
    if (*build) {
      return RunBuild(clouds, origin, voxel_size, truncation, max_distance, build_id,
                      build_out);
    }
    if (*synth) return RunSynth(scene, out_dir, synth_threads);
    if (*features) return RunFeatures(archive, out_dir, fo);
    if (*match) return RunMatch(query, target, match_out, mo);
    if (*evaluate) return RunEvaluate(scene, archives, out_dir, eo);
    if (*ablate) return RunAblate(scene, archives, d_lims, out_dir, ao);
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
