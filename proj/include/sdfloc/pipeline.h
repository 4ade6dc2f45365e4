#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sdfloc/descriptor.h"
#include "sdfloc/fitness.h"
#include "sdfloc/keypoints.h"
#include "sdfloc/lrf.h"
#include "sdfloc/registration.h"

namespace sdfloc {

enum class CurvatureSource { kHessian, kStructureTensor };

struct PipelineConfig {
  double r_f = 15;          // voxels
  int n_div = 10;           // per 180 degrees
  int knn = 5;
  double alpha_dist = 1e-7;
  double alpha_class = 1e-5;
  double sigma_grad = 2;    // voxels
  double sigma_desc = 15;   // voxels
  double k_axis = 0.5;
  double k_consist = 0.9;
  std::optional<double> k_dist;  // meters, scene scale
  double k_overlap = 0.15;
  int max_keypoints = 5000;
  uint64_t ransac_iterations = 4000000;
  uint64_t seed = 0;
  int min_support = 32;
  FitnessMode fitness_mode = FitnessMode::kAbsolute;
  CurvatureSource curvature_source = CurvatureSource::kHessian;
  bool early_exit = false;
  double fitness_threshold = 0.05;  // meters
  double pose_gate = 0.2;           // meters
  double match_volume = 1.0;        // m^3

  // key = value lines in a fixed order; doubles use the shortest exact form.
  std::string Serialize() const;
  static PipelineConfig Parse(const std::string& text);
  static PipelineConfig ReadFile(const std::filesystem::path& path);
  void Set(const std::string& key, const std::string& value);
  void Validate() const;
  RansacConfig Ransac(int num_threads) const;
  DescriptorParams Descriptors() const { return {n_div, alpha_dist, alpha_class}; }
};

std::string FormatDouble(double v);

struct FeatureSet {
  std::vector<Keypoint> keypoints;  // selected, strength order
  std::vector<Descriptor> descriptors;
  std::vector<Lrf> lrfs;                      // parallel to descriptors
  std::vector<size_t> descriptor_keypoint;    // index into keypoints
  size_t skipped_insufficient = 0;
  size_t skipped_degenerate = 0;
};

// Holds the filtered fields and the full strength-sorted candidate list of one
// submap so that several keypoint selections can share the expensive part.
class FeatureExtractor {
 public:
  FeatureExtractor(const SdfSubmap& sdf, const PipelineConfig& cfg, int num_threads = 1);

  // Top max_keypoints among candidates with |sdf| < d_lim (all when unset).
  FeatureSet Extract(std::optional<double> d_lim = std::nullopt) const;
  const std::vector<Keypoint>& candidates() const { return candidates_; }

 private:
  const SdfSubmap& sdf_;
  PipelineConfig cfg_;
  int num_threads_;
  VectorField gradients_;
  std::vector<Keypoint> candidates_;
};

FeatureSet ExtractFeatures(const SdfSubmap& sdf, const PipelineConfig& cfg,
                           int num_threads = 1);

struct PreparedSubmap {
  SdfSubmap submap;
  IsoSurfaceCloud iso;
  FeatureSet features;
};

IsoSurfaceCloud IsoSurfaceOrEmpty(const SdfSubmap& sdf);

MatchResult MatchPair(const PreparedSubmap& query, const PreparedSubmap& target,
                      const PipelineConfig& cfg, int num_threads = 1);

struct PairRecord {
  MatchResult result;
  double overlap_volume = 0.0;
  bool ground_truth_match = false;
  double translation_error = std::numeric_limits<double>::quiet_NaN();
  double rotation_error_deg = std::numeric_limits<double>::quiet_NaN();
};

struct PrPoint {
  double threshold = 0.0;
  size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> precision;
  std::optional<double> recall;
};

struct FitnessSweep {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  static FitnessSweep Parse(const std::string& spec);  // "lo:hi:n"
};

struct EvaluationReport {
  std::vector<PairRecord> pairs;
  std::vector<PrPoint> pr;
  double auc = 0.0;
};

// Pair counts at one threshold: a pair is positive when its decision at that
// threshold is matched; it is a true positive only if it is also a ground-truth
// match with translation error within the pose gate, otherwise a false
// positive. Negatives split into false negatives (ground-truth matches) and
// true negatives.
PrPoint ComputePrPoint(const std::vector<PairRecord>& pairs, double threshold,
                       double pose_gate);

// Thresholds: explicit sweep, or 0 plus just above every distinct |fitness|.
std::vector<PrPoint> ComputePrCurve(const std::vector<PairRecord>& pairs,
                                    double pose_gate,
                                    const std::optional<FitnessSweep>& sweep);

// Step integral of precision over recall along increasing threshold.
double AreaUnderPr(const std::vector<PrPoint>& pr);

EvaluationReport EvaluateCollection(const std::vector<PreparedSubmap>& submaps,
                                    const PipelineConfig& cfg, int num_threads = 1,
                                    const std::optional<FitnessSweep>& sweep = std::nullopt);

std::vector<PreparedSubmap> PrepareCollection(const std::vector<SdfSubmap>& submaps,
                                              const PipelineConfig& cfg,
                                              int num_threads = 1);

struct AblationRow {
  double d_lim = std::numeric_limits<double>::infinity();
  size_t total_keypoints = 0;
  EvaluationReport report;
};

std::vector<double> DefaultAblationLimits();

AblationRow EvaluateWithLimit(const std::vector<SdfSubmap>& submaps,
                              const std::vector<FeatureExtractor>& extractors,
                              const std::vector<IsoSurfaceCloud>& isos,
                              const PipelineConfig& cfg, double d_lim, int num_threads,
                              const std::optional<FitnessSweep>& sweep);

std::vector<AblationRow> AblateFreespace(const std::vector<SdfSubmap>& submaps,
                                         const PipelineConfig& cfg,
                                         const std::vector<double>& d_lims,
                                         int num_threads = 1,
                                         const std::optional<FitnessSweep>& sweep =
                                             std::nullopt);

std::string PairsCsv(const std::vector<PairRecord>& pairs);
std::string PrCsv(const std::vector<PrPoint>& pr);
std::string KeypointsCsv(const std::vector<PreparedSubmap>& submaps);
std::string LrfDump(const FeatureSet& features);
std::string AblationCsv(const std::vector<AblationRow>& rows);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace sdfloc
