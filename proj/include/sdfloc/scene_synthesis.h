#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "sdfloc/synthetic_scene.h"

namespace sdfloc {

struct Viewpoint {
  std::string name;
  RigidTransform world_from_view;
  Vec3 half_extent = Vec3::Constant(1.0);  // carve box in the view frame, meters
};

// Scene file, one directive per line ('#' starts a comment, angles in degrees):
//   voxel_size <m>            max_distance <m>       inside_band <m>
//   noise_sigma <m>           seed <u64>             match_volume <m^3>
//   extent <hx> <hy> <hz>                       default carve half extent
//   sphere <x> <y> <z> <r>
//   box    <x> <y> <z> <hx> <hy> <hz> [<yaw> <pitch> <roll>]
//   cavity <x> <y> <z> <hx> <hy> <hz> [<yaw> <pitch> <roll>]
//   plane  <x> <y> <z> [<yaw> <pitch> <roll>]   solid below local z = 0
//   bounds <minx> <miny> <minz> <maxx> <maxy> <maxz>
//   viewpoint <name> <x> <y> <z> <yaw> <pitch> <roll> [<hx> <hy> <hz>]
struct ScenePlan {
  SceneSpec spec;
  double voxel_size = 0.05;
  double max_distance = 0.75;
  double inside_band = 0.15;
  double noise_sigma = 0.0;
  uint64_t seed = 0;
  double match_volume = 1.0;
  Vec3 default_extent = Vec3::Constant(1.0);
  std::vector<Viewpoint> viewpoints;
};

ScenePlan ParseScenePlan(std::istream& in);
ScenePlan ReadScenePlan(const std::filesystem::path& path);

// One submap per viewpoint, expressed in the viewpoint frame (pose =
// world_from_view). A voxel is stored iff its center lies in the view's box
// and the analytic distance lies in [-inside_band, max_distance]. Noise is
// seeded per viewpoint from plan.seed. Throws kInsufficientData (empty carve)
// when a viewpoint sees no voxels.
std::vector<SdfSubmap> CarveSubmaps(const ScenePlan& plan, int num_threads = 1);
SdfSubmap CarveSubmap(const ScenePlan& plan, size_t viewpoint_index);

// b_from_a from the submap poses.
RigidTransform RelativeTransform(const SdfSubmap& a, const SdfSubmap& b);

// Voxels of `a` whose centers, mapped by b_from_a, land in stored voxels of
// `b`, times voxel_size(a)^3.
double OverlapVolume(const SdfSubmap& a, const SdfSubmap& b, const RigidTransform& b_from_a);

std::filesystem::path DataDirectory();

}  // namespace sdfloc
