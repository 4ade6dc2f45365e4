#include "sdfloc/tsdf_integrator.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdfloc {
namespace {

// Amanatides & Woo traversal of the voxels intersected by the segment
// origin + t * dir, t in [0, length].
template <typename Fn>
void TraverseRay(const Vec3& origin, const Vec3& dir, double length,
                 double voxel_size, Fn&& visit) {
  VoxelIndex v = VoxelContaining(origin, voxel_size);
  int step[3];
  double t_max[3];
  double t_delta[3];
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (dir[a] > 0.0) {
      step[a] = 1;
      t_max[a] = ((v[a] + 1) * voxel_size - origin[a]) / dir[a];
      t_delta[a] = voxel_size / dir[a];
    } else if (dir[a] < 0.0) {
      step[a] = -1;
      t_max[a] = (v[a] * voxel_size - origin[a]) / dir[a];
      t_delta[a] = -voxel_size / dir[a];
    } else {
      step[a] = 0;
      t_max[a] = kInf;
      t_delta[a] = kInf;
    }
  }
  double t = 0.0;
  while (t <= length) {
    visit(v);
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    if (t_max[axis] == kInf) break;
    t = t_max[axis];
    t_max[axis] += t_delta[axis];
    v[axis] += step[axis];
  }
}

}  // namespace

IntegrationStats IntegratePointcloud(SdfSubmap& submap, const Vec3& sensor_origin,
                                     std::span<const Vec3> points) {
  IntegrationStats stats;
  if (points.empty()) return stats;
  const double vs = submap.voxel_size();
  const double trunc = submap.truncation();
  if (!(trunc >= 2.0 * vs)) {
    throw Error(ErrorCode::kInvalidArgument,
                "truncation must be at least twice the voxel size");
  }
  if (!sensor_origin.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "sensor origin is not finite");
  }
  auto& grid = submap.voxels();
  for (const Vec3& p : points) {
    if (!p.allFinite()) {
      ++stats.rejected_nonfinite;
      continue;
    }
    const Vec3 ray = p - sensor_origin;
    const double depth = ray.norm();
    if (depth < 1e-9) continue;
    const Vec3 dir = ray / depth;
    ++stats.integrated_points;
    TraverseRay(sensor_origin, dir, depth + trunc, vs, [&](const VoxelIndex& v) {
      const double sdf = depth - (submap.Center(v) - sensor_origin).dot(dir);
      if (sdf < -trunc) return;
      const float d = static_cast<float>(std::min(sdf, trunc));
      SdfVoxel& voxel = grid.At(v);
      const float w = voxel.weight;
      voxel.distance = (voxel.distance * w + d) / (w + 1.f);
      voxel.weight = std::min(w + 1.f, kMaxTsdfWeight);
      ++stats.voxel_updates;
    });
  }
  return stats;
}

}  // namespace sdfloc
