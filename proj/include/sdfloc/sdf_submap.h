#pragma once

#include <optional>
#include <vector>

#include "sdfloc/block_grid.h"
#include "sdfloc/common.h"
#include "sdfloc/rigid_transform.h"

namespace sdfloc {

struct SdfVoxel {
  float distance = 0.f;  // meters, negative inside surfaces
  float weight = 0.f;    // >= 0
};

struct SdfSample {
  double distance = 0.0;
  double weight = 0.0;
};

// Sparse signed distance field in its own frame S. The set of stored voxels
// is the observed domain; world_from_submap is T_WS.
class SdfSubmap {
 public:
  SdfSubmap() = default;
  SdfSubmap(int id, double voxel_size, double truncation,
            const RigidTransform& world_from_submap = RigidTransform::Identity());

  int id() const { return id_; }
  void set_id(int id) { id_ = id; }
  double voxel_size() const { return voxel_size_; }
  double truncation() const { return truncation_; }
  void set_truncation(double t) { truncation_ = t; }
  const RigidTransform& world_from_submap() const { return world_from_submap_; }
  void set_world_from_submap(const RigidTransform& t) { world_from_submap_ = t; }

  BlockGrid<SdfVoxel>& voxels() { return voxels_; }
  const BlockGrid<SdfVoxel>& voxels() const { return voxels_; }
  size_t size() const { return voxels_.size(); }
  bool empty() const { return voxels_.empty(); }

  Vec3 Center(const VoxelIndex& v) const { return VoxelCenter(v, voxel_size_); }
  VoxelIndex IndexOf(const Vec3& p) const { return VoxelContaining(p, voxel_size_); }

  // Trilinear interpolation over the 8 voxel centers around p (submap frame).
  // Corners carrying zero interpolation weight need not be stored; any other
  // missing corner makes the sample unobserved (nullopt).
  std::optional<SdfSample> SampleTrilinear(const Vec3& p) const;

 private:
  int id_ = 0;
  double voxel_size_ = 0.05;
  double truncation_ = 0.15;
  RigidTransform world_from_submap_;
  BlockGrid<SdfVoxel> voxels_;
};

}  // namespace sdfloc
