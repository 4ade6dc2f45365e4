#include "sdfloc/fitness.h"

#include <cmath>

namespace sdfloc {

const char* DecisionName(Decision d) {
  switch (d) {
    case Decision::kMatched: return "matched";
    case Decision::kRejectedOverlap: return "rejected_overlap";
    case Decision::kRejectedFitness: return "rejected_fitness";
    case Decision::kNoCandidate: return "no_candidate";
  }
  return "unknown";
}

DirectionalSum ComputeDirectionalSum(const SdfSubmap& sdf, const IsoSurfaceCloud& iso,
                                     const RigidTransform& sdf_from_iso,
                                     FitnessMode mode) {
  DirectionalSum out;
  out.total_count = iso.points.size();
  for (const Vec3& p : iso.points) {
    const std::optional<SdfSample> s = sdf.SampleTrilinear(sdf_from_iso * p);
    if (!s) continue;
    ++out.valid_count;
    const double phi = mode == FitnessMode::kAbsolute ? std::abs(s->distance) : s->distance;
    out.weighted_sum += s->weight * phi;
    out.weight_sum += s->weight;
  }
  return out;
}

FitnessResult EvaluateFitness(const SdfSubmap& query, const IsoSurfaceCloud& query_iso,
                              const SdfSubmap& target, const IsoSurfaceCloud& target_iso,
                              const RigidTransform& target_from_query, double k_overlap,
                              FitnessMode mode) {
  FitnessResult r;
  r.query_into_target = ComputeDirectionalSum(target, query_iso, target_from_query, mode);
  r.target_into_query =
      ComputeDirectionalSum(query, target_iso, target_from_query.Inverse(), mode);
  const size_t total = r.query_into_target.total_count + r.target_into_query.total_count;
  const size_t valid = r.query_into_target.valid_count + r.target_into_query.valid_count;
  r.overlap_fraction = total == 0 ? 0.0 : double(valid) / double(total);
  const double n = r.query_into_target.weight_sum + r.target_into_query.weight_sum;
  r.overlap_ok = r.overlap_fraction >= k_overlap && n > 0.0;
  if (r.overlap_ok) {
    r.fitness =
        -(r.query_into_target.weighted_sum + r.target_into_query.weighted_sum) / n;
  }
  return r;
}

Decision Decide(const FitnessResult& result, double fitness_threshold) {
  if (!result.overlap_ok || !result.fitness) return Decision::kRejectedOverlap;
  return std::abs(*result.fitness) < fitness_threshold ? Decision::kMatched
                                                       : Decision::kRejectedFitness;
}

}  // namespace sdfloc
