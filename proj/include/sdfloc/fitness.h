#pragma once

#include <optional>
#include <string>

#include "sdfloc/isosurface.h"
#include "sdfloc/rigid_transform.h"
#include "sdfloc/sdf_submap.h"

namespace sdfloc {

enum class FitnessMode { kAbsolute, kSigned };
enum class Decision { kMatched, kRejectedOverlap, kRejectedFitness, kNoCandidate };

const char* DecisionName(Decision d);

struct DirectionalSum {
  double weighted_sum = 0.0;  // sum of w * |phi| (or w * phi in signed mode)
  double weight_sum = 0.0;
  size_t valid_count = 0;
  size_t total_count = 0;
};

// Samples `sdf` at T * p for each iso point; unobserved samples count toward
// total_count only.
DirectionalSum ComputeDirectionalSum(const SdfSubmap& sdf, const IsoSurfaceCloud& iso,
                                     const RigidTransform& sdf_from_iso,
                                     FitnessMode mode = FitnessMode::kAbsolute);

struct FitnessResult {
  std::optional<double> fitness;  // meters, unset when overlap-rejected
  double overlap_fraction = 0.0;
  bool overlap_ok = false;
  DirectionalSum query_into_target;
  DirectionalSum target_into_query;
};

// Bidirectional fitness -(S_1 + S_2) / N with N the combined weight sum. The
// target field is sampled at target_from_query * query_iso and the query field
// at the inverse image of target_iso.
FitnessResult EvaluateFitness(const SdfSubmap& query, const IsoSurfaceCloud& query_iso,
                              const SdfSubmap& target, const IsoSurfaceCloud& target_iso,
                              const RigidTransform& target_from_query, double k_overlap,
                              FitnessMode mode = FitnessMode::kAbsolute);

Decision Decide(const FitnessResult& result, double fitness_threshold);

struct MatchResult {
  int query_id = 0;
  int target_id = 0;
  RigidTransform target_from_query;
  size_t inlier_count = 0;
  size_t num_correspondences = 0;
  std::optional<double> fitness;
  double overlap_fraction = 0.0;
  Decision decision = Decision::kNoCandidate;
};

}  // namespace sdfloc
