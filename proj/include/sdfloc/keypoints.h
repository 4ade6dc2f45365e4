#pragma once

#include <vector>

#include "sdfloc/filtering.h"
#include "sdfloc/sdf_submap.h"

namespace sdfloc {

struct Keypoint {
  VoxelIndex index;
  Vec3 position = Vec3::Zero();  // voxel center, submap frame
  double response = 0.0;         // determinant of Hessian
  double sdf_value = 0.0;        // unblurred distance at index
  Vec3 hessian_eigs = Vec3::Zero();  // descending
};

// det(H) on the common domain of the six components.
ScalarField DohResponse(const HessianFields& hessian);

Mat3 HessianAt(const HessianFields& hessian, const VoxelIndex& v);

// Strict 26-neighbour extrema of the DoH field. A voxel qualifies only if all
// 26 neighbours are in the DoH domain and its response is strictly above (or
// strictly below) every neighbour. Output is in lexicographic index order.
std::vector<Keypoint> DetectExtrema(const ScalarField& doh, const SdfSubmap& sdf,
                                    const HessianFields& hessian, int num_threads = 1);

// Stable order: |response| descending, then lexicographic index.
void SortByStrength(std::vector<Keypoint>& keypoints);

// First n of SortByStrength order (all if fewer). Throws for n == 0.
std::vector<Keypoint> SelectTopN(std::vector<Keypoint> keypoints, size_t n);

// Keeps keypoints with |sdf_value| < d_lim, preserving order.
std::vector<Keypoint> FilterBySurfaceDistance(const std::vector<Keypoint>& keypoints,
                                              double d_lim);

}  // namespace sdfloc
