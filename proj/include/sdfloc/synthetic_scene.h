#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdfloc/sdf_submap.h"

namespace sdfloc {

enum class PrimitiveType { kSphere, kBox, kPlane, kCavity };

// Analytic shape posed in the world. Solids (sphere, box, plane half-space
// z <= 0 in the primitive frame) are merged by min-union. A cavity is a box of
// free space cut out of otherwise solid material; several cavities union their
// free space (rooms, corridors).
struct Primitive {
  PrimitiveType type = PrimitiveType::kSphere;
  RigidTransform world_from_primitive;
  double radius = 0.0;               // sphere
  Vec3 half_extents = Vec3::Zero();  // box, cavity

  double SignedDistance(const Vec3& p_world) const;
};

struct AxisAlignedBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
};

struct SceneSpec {
  std::vector<Primitive> primitives;
  std::optional<AxisAlignedBox> bounds;  // required when a plane is present

  // CSG distance at a world point. Throws kDegenerate for zero-extent shapes.
  double SignedDistance(const Vec3& p_world) const;
  void Validate() const;
};

struct RasterOptions {
  double voxel_size = 0.05;
  double truncation = 0.15;
  double max_distance = 0.75;
  double noise_sigma = 0.0;
  uint64_t seed = 0;
};

// Rasterizes the analytic field onto voxel centers inside the scene bounds,
// keeping voxels with |phi| <= max_distance. Optional zero-mean Gaussian noise
// (std noise_sigma) is added to phi; weights are 1. The result is in the
// world frame (identity pose).
SdfSubmap BuildSyntheticScene(const SceneSpec& spec, const RasterOptions& options);

}  // namespace sdfloc
