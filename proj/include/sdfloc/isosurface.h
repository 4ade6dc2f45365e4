#pragma once

#include <vector>

#include "sdfloc/sdf_submap.h"

namespace sdfloc {

struct IsoSurfaceCloud {
  std::vector<Vec3> points;  // submap frame, meters
  bool no_surface = false;   // every stored distance shares one sign
};

// One point per stored face-adjacent voxel pair whose distances change sign
// (negative vs non-negative), placed at the linear zero crossing along the
// edge joining the two centers. Points are ordered by (voxel, axis).
IsoSurfaceCloud ExtractIsosurface(const SdfSubmap& sdf);

}  // namespace sdfloc
