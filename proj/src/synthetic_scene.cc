#include "sdfloc/synthetic_scene.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sdfloc {
namespace {

double BoxDistance(const Vec3& p, const Vec3& half) {
  const Vec3 q = p.cwiseAbs() - half;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

AxisAlignedBox BoundsOf(const Primitive& prim, double margin) {
  Vec3 half;
  if (prim.type == PrimitiveType::kSphere) {
    half = Vec3::Constant(prim.radius);
  } else {
    // Bounding box of the rotated box.
    half = prim.world_from_primitive.rotation().cwiseAbs() * prim.half_extents;
  }
  half.array() += margin;
  const Vec3& c = prim.world_from_primitive.translation();
  return {c - half, c + half};
}

}  // namespace

double Primitive::SignedDistance(const Vec3& p_world) const {
  const Vec3 p = world_from_primitive.rotation().transpose() *
                 (p_world - world_from_primitive.translation());
  switch (type) {
    case PrimitiveType::kSphere:
      return p.norm() - radius;
    case PrimitiveType::kBox:
      return BoxDistance(p, half_extents);
    case PrimitiveType::kPlane:
      return p.z();
    case PrimitiveType::kCavity:
      return -BoxDistance(p, half_extents);
  }
  return std::numeric_limits<double>::infinity();
}

void SceneSpec::Validate() const {
  if (primitives.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scene has no primitives");
  }
  bool has_plane = false;
  for (const Primitive& p : primitives) {
    switch (p.type) {
      case PrimitiveType::kSphere:
        if (!(p.radius > 0.0))
          throw Error(ErrorCode::kDegenerate, "sphere with non-positive radius");
        break;
      case PrimitiveType::kBox:
      case PrimitiveType::kCavity:
        if (!(p.half_extents.minCoeff() > 0.0))
          throw Error(ErrorCode::kDegenerate, "box with zero extent");
        break;
      case PrimitiveType::kPlane:
        has_plane = true;
        break;
    }
  }
  if (has_plane && !bounds) {
    throw Error(ErrorCode::kInvalidArgument,
                "scenes containing planes need explicit bounds");
  }
  if (bounds && !((bounds->max - bounds->min).minCoeff() > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "scene bounds are empty");
  }
}

double SceneSpec::SignedDistance(const Vec3& p_world) const {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double solid = kInf;
  double nearest_cavity = kInf;
  bool any_cavity = false;
  for (const Primitive& prim : primitives) {
    if (prim.type == PrimitiveType::kCavity) {
      any_cavity = true;
      // Inside the union of cavities the free space is the max depth.
      nearest_cavity = std::min(nearest_cavity, -prim.SignedDistance(p_world));
    } else {
      solid = std::min(solid, prim.SignedDistance(p_world));
    }
  }
  if (any_cavity) solid = std::min(solid, -nearest_cavity);
  return solid;
}

SdfSubmap BuildSyntheticScene(const SceneSpec& spec, const RasterOptions& options) {
  spec.Validate();
  const double vs = options.voxel_size;
  AxisAlignedBox box;
  if (spec.bounds) {
    box = *spec.bounds;
  } else {
    box.min = Vec3::Constant(std::numeric_limits<double>::infinity());
    box.max = -box.min;
    for (const Primitive& prim : spec.primitives) {
      const AxisAlignedBox b = BoundsOf(prim, options.max_distance + vs);
      box.min = box.min.cwiseMin(b.min);
      box.max = box.max.cwiseMax(b.max);
    }
  }
  SdfSubmap submap(0, vs, options.truncation);
  const VoxelIndex lo = VoxelContaining(box.min, vs);
  const VoxelIndex hi = VoxelContaining(box.max, vs);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_sigma);
  for (int32_t z = lo.z; z <= hi.z; ++z) {
    for (int32_t y = lo.y; y <= hi.y; ++y) {
      for (int32_t x = lo.x; x <= hi.x; ++x) {
        const VoxelIndex v{x, y, z};
        const double phi = spec.SignedDistance(VoxelCenter(v, vs));
        if (std::abs(phi) > options.max_distance) continue;
        const double value =
            options.noise_sigma > 0.0 ? phi + noise(rng) : phi;
        submap.voxels().Set(v, {static_cast<float>(value), 1.f});
      }
    }
  }
  return submap;
}

}  // namespace sdfloc
