#include "sdfloc/keypoints.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "sdfloc/parallel.h"

namespace sdfloc {

Mat3 HessianAt(const HessianFields& h, const VoxelIndex& v) {
  const double* xx = h.xx.Find(v);
  const double* xy = h.xy.Find(v);
  const double* xz = h.xz.Find(v);
  const double* yy = h.yy.Find(v);
  const double* yz = h.yz.Find(v);
  const double* zz = h.zz.Find(v);
  if (!xx || !xy || !xz || !yy || !yz || !zz) {
    throw Error(ErrorCode::kInvalidArgument, "Hessian undefined at voxel");
  }
  Mat3 m;
  m << *xx, *xy, *xz,
       *xy, *yy, *yz,
       *xz, *yz, *zz;
  return m;
}

ScalarField DohResponse(const HessianFields& h) {
  ScalarField doh;
  h.xx.ForEach([&](const VoxelIndex& v, const double& xx) {
    const double* xy = h.xy.Find(v);
    const double* xz = h.xz.Find(v);
    const double* yy = h.yy.Find(v);
    const double* yz = h.yz.Find(v);
    const double* zz = h.zz.Find(v);
    if (!xy || !xz || !yy || !yz || !zz) return;
    // Cofactor expansion along the first row.
    const double det = xx * (*yy * *zz - *yz * *yz) -
                       *xy * (*xy * *zz - *yz * *xz) +
                       *xz * (*xy * *yz - *yy * *xz);
    doh.Set(v, det);
  });
  return doh;
}

std::vector<Keypoint> DetectExtrema(const ScalarField& doh, const SdfSubmap& sdf,
                                    const HessianFields& hessian, int num_threads) {
  const std::vector<VoxelIndex> blocks = doh.SortedBlockIndices();
  std::vector<std::vector<VoxelIndex>> found(blocks.size());
  ParallelFor(blocks.size(), num_threads, [&](size_t bi) {
    const ScalarField::Block& block = *doh.FindBlock(blocks[bi]);
    for (int l = 0; l < ScalarField::kVoxelsPerBlock; ++l) {
      if (!block.Has(l)) continue;
      const VoxelIndex v = ScalarField::VoxelOf(blocks[bi], l);
      const double center = block.values[l];
      bool is_max = true;
      bool is_min = true;
      for (int dz = -1; dz <= 1 && (is_max || is_min); ++dz) {
        for (int dy = -1; dy <= 1 && (is_max || is_min); ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0 && dz == 0) continue;
            const double* nb = doh.Find(v + VoxelIndex{dx, dy, dz});
            if (nb == nullptr) {
              is_max = is_min = false;
              break;
            }
            if (!(center > *nb)) is_max = false;
            if (!(center < *nb)) is_min = false;
            if (!is_max && !is_min) break;
          }
        }
      }
      if (is_max || is_min) found[bi].push_back(v);
    }
  });

  std::vector<VoxelIndex> extrema;
  for (const auto& f : found) extrema.insert(extrema.end(), f.begin(), f.end());
  std::sort(extrema.begin(), extrema.end());

  std::vector<Keypoint> keypoints;
  keypoints.reserve(extrema.size());
  for (const VoxelIndex& v : extrema) {
    const SdfVoxel* voxel = sdf.voxels().Find(v);
    if (voxel == nullptr) continue;
    Keypoint kp;
    kp.index = v;
    kp.position = sdf.Center(v);
    kp.response = *doh.Find(v);
    kp.sdf_value = voxel->distance;
    Eigen::SelfAdjointEigenSolver<Mat3> solver(HessianAt(hessian, v),
                                               Eigen::EigenvaluesOnly);
    const Vec3 ascending = solver.eigenvalues();
    kp.hessian_eigs = ascending.reverse();
    keypoints.push_back(kp);
  }
  return keypoints;
}

void SortByStrength(std::vector<Keypoint>& keypoints) {
  std::sort(keypoints.begin(), keypoints.end(),
            [](const Keypoint& a, const Keypoint& b) {
              const double ma = std::abs(a.response);
              const double mb = std::abs(b.response);
              if (ma != mb) return ma > mb;
              return a.index < b.index;
            });
}

std::vector<Keypoint> SelectTopN(std::vector<Keypoint> keypoints, size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "top-N requires n > 0");
  SortByStrength(keypoints);
  if (keypoints.size() > n) keypoints.resize(n);
  return keypoints;
}

std::vector<Keypoint> FilterBySurfaceDistance(const std::vector<Keypoint>& keypoints,
                                              double d_lim) {
  if (!(d_lim > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "d_lim must be positive");
  }
  std::vector<Keypoint> out;
  for (const Keypoint& kp : keypoints) {
    if (std::abs(kp.sdf_value) < d_lim) out.push_back(kp);
  }
  return out;
}

}  // namespace sdfloc
