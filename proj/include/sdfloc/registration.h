#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sdfloc/descriptor.h"
#include "sdfloc/rigid_transform.h"

namespace sdfloc {

struct Correspondence {
  Vec3 query_point = Vec3::Zero();   // query submap frame
  Vec3 target_point = Vec3::Zero();  // target submap frame
  double distance = 0.0;             // descriptor distance
  size_t query_index = 0;
  size_t target_index = 0;
};

struct RansacConfig {
  int k_neighbors = 5;
  double k_consist = 0.9;
  double k_dist = 0.0;  // meters; required
  uint64_t max_iterations = 4000000;
  uint64_t seed = 0;
  bool early_exit = false;  // stop once the inlier ratio exceeds 0.9
  int num_threads = 1;

  void Validate() const;
};

struct TransformCandidate {
  RigidTransform target_from_query;
  size_t inlier_count = 0;
  std::array<size_t, 3> triple{};
};

// For each query descriptor (in order), its min(k, |target|) nearest target
// descriptors by Euclidean distance, ties broken by target index. Exhaustive.
std::vector<Correspondence> FindCorrespondences(const std::vector<Descriptor>& query,
                                                const std::vector<Descriptor>& target,
                                                int k, int num_threads = 1);

// True iff k*d_t < d_q < d_t/k for all three endpoint pairs.
bool ConsistencyCheck(const Correspondence& a, const Correspondence& b,
                      const Correspondence& c, double k_consist);

// Least-squares rigid target_from_query for three correspondences; nullopt if
// the query triangle area is <= 1e-9 m^2.
std::optional<RigidTransform> EstimateRigid(const Correspondence& a,
                                            const Correspondence& b,
                                            const Correspondence& c);

// Kabsch on arbitrary point sets (target ~ R * query + t).
RigidTransform KabschFit(const std::vector<Vec3>& query, const std::vector<Vec3>& target);

// Number of correspondences with |p_t - T p_q| < k_dist.
size_t InlierScore(const RigidTransform& target_from_query,
                   const std::vector<Correspondence>& correspondences, double k_dist);

// Seeded 3-point RANSAC. Iterations run in fixed-size chunks, each with its own
// derived generator, so the result does not depend on the thread count.
// Returns nullopt when no triple passes the checks. Throws for |C| < 3.
std::optional<TransformCandidate> RansacRegister(
    const std::vector<Correspondence>& correspondences, const RansacConfig& cfg);

constexpr uint64_t kRansacChunk = 10000;

}  // namespace sdfloc
