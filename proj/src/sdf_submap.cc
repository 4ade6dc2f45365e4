#include "sdfloc/sdf_submap.h"

#include <cmath>

namespace sdfloc {

SdfSubmap::SdfSubmap(int id, double voxel_size, double truncation,
                     const RigidTransform& world_from_submap)
    : id_(id),
      voxel_size_(voxel_size),
      truncation_(truncation),
      world_from_submap_(world_from_submap) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw Error(ErrorCode::kInvalidArgument, "voxel_size must be positive");
  }
}

std::optional<SdfSample> SdfSubmap::SampleTrilinear(const Vec3& p) const {
  if (!p.allFinite()) return std::nullopt;
  constexpr double kSnap = 1e-9;
  VoxelIndex base;
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    const double u = p[a] / voxel_size_ - 0.5;
    double f = std::floor(u);
    double t = u - f;
    if (t < kSnap) {
      t = 0.0;
    } else if (t > 1.0 - kSnap) {
      t = 0.0;
      f += 1.0;
    }
    base[a] = static_cast<int32_t>(f);
    frac[a] = t;
  }
  double distance = 0.0;
  double weight = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    double w = 1.0;
    VoxelIndex v = base;
    for (int a = 0; a < 3; ++a) {
      const bool upper = (corner >> a) & 1;
      w *= upper ? frac[a] : 1.0 - frac[a];
      if (upper) v[a] += 1;
    }
    if (w == 0.0) continue;
    const SdfVoxel* voxel = voxels_.Find(v);
    if (voxel == nullptr) return std::nullopt;
    distance += w * voxel->distance;
    weight += w * voxel->weight;
  }
  return SdfSample{distance, weight};
}

}  // namespace sdfloc
