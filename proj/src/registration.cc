#include "sdfloc/registration.h"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <random>

#include "sdfloc/parallel.h"

namespace sdfloc {

void RansacConfig::Validate() const {
  if (k_neighbors < 1) throw Error(ErrorCode::kInvalidArgument, "knn must be >= 1");
  if (!(k_consist > 0.0 && k_consist < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "k_consist must lie in (0, 1)");
  }
  if (!(k_dist > 0.0)) throw Error(ErrorCode::kInvalidArgument, "k_dist must be > 0");
  if (max_iterations == 0) {
    throw Error(ErrorCode::kInvalidArgument, "RANSAC iterations must be > 0");
  }
}

std::vector<Correspondence> FindCorrespondences(const std::vector<Descriptor>& query,
                                                const std::vector<Descriptor>& target,
                                                int k, int num_threads) {
  if (target.empty()) throw Error(ErrorCode::kInsufficientData, "empty target set");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const size_t kk = std::min<size_t>(k, target.size());
  std::vector<std::vector<Correspondence>> per_query(query.size());
  ParallelFor(query.size(), num_threads, [&](size_t qi) {
    std::vector<std::pair<double, size_t>> d(target.size());
    for (size_t ti = 0; ti < target.size(); ++ti) {
      d[ti] = {DescriptorDistance(query[qi], target[ti]), ti};
    }
    std::partial_sort(d.begin(), d.begin() + kk, d.end());
    auto& out = per_query[qi];
    for (size_t j = 0; j < kk; ++j) {
      Correspondence c;
      c.query_point = query[qi].position;
      c.target_point = target[d[j].second].position;
      c.distance = d[j].first;
      c.query_index = qi;
      c.target_index = d[j].second;
      out.push_back(c);
    }
  });
  std::vector<Correspondence> flat;
  flat.reserve(query.size() * kk);
  for (auto& v : per_query) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

namespace {

bool PairConsistent(const Correspondence& a, const Correspondence& b, double k) {
  const double dq = (a.query_point - b.query_point).norm();
  const double dt = (a.target_point - b.target_point).norm();
  return k * dt < dq && dq < dt / k;
}

}  // namespace

bool ConsistencyCheck(const Correspondence& a, const Correspondence& b,
                      const Correspondence& c, double k_consist) {
  return PairConsistent(a, b, k_consist) && PairConsistent(a, c, k_consist) &&
         PairConsistent(b, c, k_consist);
}

RigidTransform KabschFit(const std::vector<Vec3>& query, const std::vector<Vec3>& target) {
  if (query.size() != target.size() || query.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "Kabsch needs matched nonempty sets");
  }
  Vec3 cq = Vec3::Zero();
  Vec3 ct = Vec3::Zero();
  for (size_t i = 0; i < query.size(); ++i) {
    cq += query[i];
    ct += target[i];
  }
  cq /= double(query.size());
  ct /= double(query.size());
  Mat3 h = Mat3::Zero();
  for (size_t i = 0; i < query.size(); ++i) {
    h += (query[i] - cq) * (target[i] - ct).transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Mat3 r = v * d * u.transpose();
  return RigidTransform(r, ct - r * cq);
}

std::optional<RigidTransform> EstimateRigid(const Correspondence& a,
                                            const Correspondence& b,
                                            const Correspondence& c) {
  const double area =
      0.5 * (b.query_point - a.query_point).cross(c.query_point - a.query_point).norm();
  if (!(area > 1e-9)) return std::nullopt;
  return KabschFit({a.query_point, b.query_point, c.query_point},
                   {a.target_point, b.target_point, c.target_point});
}

size_t InlierScore(const RigidTransform& target_from_query,
                   const std::vector<Correspondence>& correspondences, double k_dist) {
  const double k2 = k_dist * k_dist;
  const Mat3& r = target_from_query.rotation();
  const Vec3& t = target_from_query.translation();
  size_t n = 0;
  for (const Correspondence& c : correspondences) {
    if ((c.target_point - (r * c.query_point + t)).squaredNorm() < k2) ++n;
  }
  return n;
}

std::optional<TransformCandidate> RansacRegister(
    const std::vector<Correspondence>& correspondences, const RansacConfig& cfg) {
  cfg.Validate();
  const size_t n = correspondences.size();
  if (n < 3) {
    throw Error(ErrorCode::kInsufficientData, "RANSAC needs at least 3 correspondences");
  }
  const uint64_t num_chunks = (cfg.max_iterations + kRansacChunk - 1) / kRansacChunk;
  std::vector<std::optional<TransformCandidate>> best(num_chunks);
  std::atomic<uint64_t> stop_chunk{num_chunks};
  const size_t exit_count = static_cast<size_t>(0.9 * double(n));

  ParallelForRange(num_chunks, cfg.num_threads, [&](size_t begin, size_t end) {
    for (size_t chunk = begin; chunk < end; ++chunk) {
      // Chunks past an early-exit chunk are discarded anyway.
      if (cfg.early_exit && chunk > stop_chunk.load()) return;
      std::mt19937_64 rng(SplitMix64(cfg.seed ^ SplitMix64(chunk)));
      std::uniform_int_distribution<size_t> pick(0, n - 1);
      const uint64_t iters =
          std::min<uint64_t>(kRansacChunk, cfg.max_iterations - chunk * kRansacChunk);
      std::optional<TransformCandidate>& local = best[chunk];
      for (uint64_t it = 0; it < iters; ++it) {
        const size_t i = pick(rng);
        size_t j = pick(rng);
        while (j == i) j = pick(rng);
        size_t k = pick(rng);
        while (k == i || k == j) k = pick(rng);
        const Correspondence& a = correspondences[i];
        const Correspondence& b = correspondences[j];
        const Correspondence& c = correspondences[k];
        if (!ConsistencyCheck(a, b, c, cfg.k_consist)) continue;
        const std::optional<RigidTransform> t = EstimateRigid(a, b, c);
        if (!t) continue;
        const size_t score = InlierScore(*t, correspondences, cfg.k_dist);
        if (!local || score > local->inlier_count) {
          local = TransformCandidate{*t, score, {i, j, k}};
          if (cfg.early_exit && score > exit_count) {
            uint64_t prev = stop_chunk.load();
            while (chunk < prev && !stop_chunk.compare_exchange_weak(prev, chunk)) {
            }
            break;
          }
        }
      }
    }
  });

  std::optional<TransformCandidate> result;
  for (uint64_t chunk = 0; chunk < num_chunks; ++chunk) {
    const auto& c = best[chunk];
    if (c && (!result || c->inlier_count > result->inlier_count)) result = c;
    if (cfg.early_exit && result && result->inlier_count > exit_count) break;
  }
  return result;
}

}  // namespace sdfloc
