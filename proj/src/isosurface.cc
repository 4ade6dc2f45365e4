#include "sdfloc/isosurface.h"

namespace sdfloc {

IsoSurfaceCloud ExtractIsosurface(const SdfSubmap& sdf) {
  if (sdf.empty()) {
    throw Error(ErrorCode::kInsufficientData, "isosurface input submap is empty");
  }
  IsoSurfaceCloud cloud;
  bool any_negative = false;
  bool any_positive = false;
  const auto& grid = sdf.voxels();
  grid.ForEach([&](const VoxelIndex& v, const SdfVoxel& voxel) {
    const double d0 = voxel.distance;
    (d0 < 0.0 ? any_negative : any_positive) = true;
    for (int axis = 0; axis < 3; ++axis) {
      VoxelIndex u = v;
      u[axis] += 1;
      const SdfVoxel* other = grid.Find(u);
      if (other == nullptr) continue;
      const double d1 = other->distance;
      if ((d0 < 0.0) == (d1 < 0.0)) continue;
      const double t = d0 / (d0 - d1);
      const Vec3 c0 = sdf.Center(v);
      const Vec3 c1 = sdf.Center(u);
      cloud.points.push_back(c0 + t * (c1 - c0));
    }
  });
  cloud.no_surface = !(any_negative && any_positive);
  return cloud;
}

}  // namespace sdfloc
