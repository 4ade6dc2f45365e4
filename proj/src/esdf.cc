#include "sdfloc/esdf.h"

#include <cmath>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

namespace sdfloc {

SdfSubmap ComputeEsdf(const SdfSubmap& tsdf, double max_distance) {
  if (tsdf.empty()) {
    throw Error(ErrorCode::kInsufficientData, "ESDF input submap is empty");
  }
  if (!(max_distance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_distance must be positive");
  }
  const double vs = tsdf.voxel_size();
  const double band = tsdf.truncation() * (1.0 - 1e-6);

  const std::vector<VoxelIndex> voxels = tsdf.voxels().SortedVoxels();
  const size_t n = voxels.size();
  BlockGrid<int32_t> slot_of;
  std::vector<float> phi(n);
  std::vector<uint8_t> fixed(n, 0);
  for (size_t i = 0; i < n; ++i) {
    slot_of.Set(voxels[i], static_cast<int32_t>(i));
    phi[i] = tsdf.voxels().Find(voxels[i])->distance;
    fixed[i] = std::abs(phi[i]) < band;
  }

  constexpr double kUnreached = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kUnreached);
  std::vector<int32_t> site(n, -1);
  using Entry = std::tuple<double, int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  for (size_t i = 0; i < n; ++i) {
    if (!fixed[i]) continue;
    dist[i] = std::abs(phi[i]);
    site[i] = static_cast<int32_t>(i);
    open.emplace(dist[i], static_cast<int32_t>(i));
  }

  while (!open.empty()) {
    const auto [d, slot] = open.top();
    open.pop();
    if (d > dist[slot]) continue;
    const bool positive = phi[slot] >= 0.f;
    const int32_t s = site[slot];
    const Vec3 site_center = VoxelCenter(voxels[s], vs);
    const double site_offset = std::abs(phi[s]);
    const VoxelIndex& v = voxels[slot];
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const int32_t* nb = slot_of.Find(v + VoxelIndex{dx, dy, dz});
          if (nb == nullptr || fixed[*nb]) continue;
          if ((phi[*nb] >= 0.f) != positive) continue;
          const double candidate =
              (VoxelCenter(voxels[*nb], vs) - site_center).norm() + site_offset;
          if (candidate < dist[*nb] && candidate <= max_distance) {
            dist[*nb] = candidate;
            site[*nb] = s;
            open.emplace(candidate, *nb);
          }
        }
      }
    }
  }

  SdfSubmap esdf(tsdf.id(), vs, tsdf.truncation(), tsdf.world_from_submap());
  for (size_t i = 0; i < n; ++i) {
    const SdfVoxel& in = *tsdf.voxels().Find(voxels[i]);
    SdfVoxel out = in;
    if (!fixed[i]) {
      const double magnitude = std::isfinite(dist[i]) ? dist[i] : max_distance;
      out.distance = static_cast<float>(phi[i] >= 0.f ? magnitude : -magnitude);
    }
    esdf.voxels().Set(voxels[i], out);
  }
  return esdf;
}

}  // namespace sdfloc
