#pragma once

#include "sdfloc/sdf_submap.h"

namespace sdfloc {

// Extends a TSDF to a Euclidean SDF over its stored voxels.
//
// Voxels inside the truncation band (|phi| < truncation) keep their values and
// seed a 26-connected brushfire wavefront. Each propagated voxel carries its
// seed ("site"), and its value is |center - site| + |phi_site|, which keeps the
// quasi-Euclidean error well below a voxel. Propagation never crosses sign:
// free-space voxels are reached from positive seeds, occupied from negative.
// Values beyond max_distance (or unreachable) saturate at +-max_distance.
// Throws kInsufficientData on an empty input.
SdfSubmap ComputeEsdf(const SdfSubmap& tsdf, double max_distance);

}  // namespace sdfloc
