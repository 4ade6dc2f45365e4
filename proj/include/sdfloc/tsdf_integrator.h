#pragma once

#include <span>

#include "sdfloc/sdf_submap.h"

namespace sdfloc {

struct IntegrationStats {
  size_t integrated_points = 0;
  size_t rejected_nonfinite = 0;
  size_t voxel_updates = 0;
};

constexpr float kMaxTsdfWeight = 1e4f;

// Projective TSDF fusion. Every voxel crossed by the ray from sensor_origin to
// (point + truncation along the ray) is merged by weighted running average
// with weight increment 1 (capped at kMaxTsdfWeight). Distances are clamped
// to +truncation on the free-space side.
// Requires truncation >= 2 * voxel_size and a finite sensor_origin.
IntegrationStats IntegratePointcloud(SdfSubmap& submap, const Vec3& sensor_origin,
                                     std::span<const Vec3> points);

}  // namespace sdfloc
