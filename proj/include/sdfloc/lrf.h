#pragma once

#include <vector>

#include "sdfloc/filtering.h"
#include "sdfloc/keypoints.h"

namespace sdfloc {

struct SupportSample {
  VoxelIndex offset;                 // from the keypoint, voxels
  Vec3 gradient = Vec3::Zero();      // Gaussian-weighted, metric
  double gauss_weight = 0.0;         // in (0, 1]
};

constexpr size_t kDefaultMinSupport = 32;

struct SupportSet {
  std::vector<SupportSample> samples;
  bool insufficient = false;  // fewer than the minimum sample count
};

// Stored gradients within Euclidean radius r_f (voxels) of the keypoint,
// weighted by exp(-|offset|^2 / (2 sigma_desc^2)).
SupportSet CollectSupport(const VectorField& gradients, const VoxelIndex& center,
                          double r_f, double sigma_desc,
                          size_t min_samples = kDefaultMinSupport);

Mat3 StructureTensor(const std::vector<SupportSample>& samples);

// Rows of `rotation` are the feature axes a1, a2, a3 (feature_from_submap).
struct Lrf {
  Mat3 rotation = Mat3::Identity();
  Vec3 eigenvalues = Vec3::Zero();  // structure tensor, descending
  int ambiguity_count = 1;          // 1, 2 or 4 frames for this keypoint
};

struct LrfAssignment {
  std::vector<Lrf> frames;
  bool degenerate = false;  // eigen-gap too small for stable axes
  double s1 = 0.0;          // sign scores along v1 and v3
  double s3 = 0.0;
};

// Eigen-decomposes S (descending), disambiguates v1 and v3 by the sign score
// s = sum(g.v) / sum|g.v| against k_axis, and completes each frame with
// a2 = a3 x a1. Ambiguous axes emit both signs; frames are ordered with a1
// sign (+ before -) outermost, then a3 sign.
LrfAssignment AssignLrfs(const Mat3& structure_tensor,
                         const std::vector<SupportSample>& samples, double k_axis);

// Sign score of the weighted gradients along `axis`; 0 when all projections
// vanish.
double AxisSignScore(const std::vector<SupportSample>& samples, const Vec3& axis);

// Number of strictly positive eigenvalues.
int CurvatureClass(const Vec3& eigenvalues);
inline int CurvatureClass(const Keypoint& kp) { return CurvatureClass(kp.hessian_eigs); }

}  // namespace sdfloc
