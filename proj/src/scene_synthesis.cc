#include "sdfloc/scene_synthesis.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "sdfloc/parallel.h"

namespace sdfloc {
namespace {

double Radians(double deg) { return deg * std::numbers::pi / 180.0; }

[[noreturn]] void Fail(int line, const std::string& msg) {
  throw Error(ErrorCode::kFormat, "scene line " + std::to_string(line) + ": " + msg);
}

std::vector<double> Numbers(std::istringstream& ss, int line) {
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) {
      Fail(line, "bad number '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

RigidTransform PoseFrom(const std::vector<double>& v, size_t at) {
  const Vec3 t(v[0], v[1], v[2]);
  if (v.size() < at + 3) return RigidTransform(Mat3::Identity(), t);
  return RigidTransform::FromYawPitchRoll(Radians(v[at]), Radians(v[at + 1]),
                                          Radians(v[at + 2]), t);
}

}  // namespace

ScenePlan ParseScenePlan(std::istream& in) {
  ScenePlan plan;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    std::string key;
    if (!(ss >> key)) continue;

    if (key == "viewpoint") {
      std::string name;
      if (!(ss >> name)) Fail(line, "viewpoint needs a name");
      const std::vector<double> v = Numbers(ss, line);
      if (v.size() != 6 && v.size() != 9) Fail(line, "viewpoint needs 6 or 9 numbers");
      Viewpoint vp;
      vp.name = name;
      vp.world_from_view = PoseFrom(v, 3);
      vp.half_extent =
          v.size() == 9 ? Vec3(v[6], v[7], v[8]) : Vec3(Vec3::Constant(-1.0));
      plan.viewpoints.push_back(vp);
      continue;
    }

    const std::vector<double> v = Numbers(ss, line);
    const auto expect = [&](std::initializer_list<size_t> sizes) {
      for (size_t s : sizes) {
        if (v.size() == s) return;
      }
      Fail(line, "wrong number of values for '" + key + "'");
    };
    if (key == "voxel_size") {
      expect({1});
      plan.voxel_size = v[0];
    } else if (key == "max_distance") {
      expect({1});
      plan.max_distance = v[0];
    } else if (key == "inside_band") {
      expect({1});
      plan.inside_band = v[0];
    } else if (key == "noise_sigma") {
      expect({1});
      plan.noise_sigma = v[0];
    } else if (key == "seed") {
      expect({1});
      if (v[0] < 0 || v[0] != std::floor(v[0])) Fail(line, "seed must be a whole number");
      plan.seed = static_cast<uint64_t>(v[0]);
    } else if (key == "match_volume") {
      expect({1});
      plan.match_volume = v[0];
    } else if (key == "extent") {
      expect({3});
      plan.default_extent = Vec3(v[0], v[1], v[2]);
    } else if (key == "sphere") {
      expect({4});
      Primitive p;
      p.type = PrimitiveType::kSphere;
      p.world_from_primitive = PoseFrom(v, 99);
      p.radius = v[3];
      plan.spec.primitives.push_back(p);
    } else if (key == "box" || key == "cavity") {
      expect({6, 9});
      Primitive p;
      p.type = key == "box" ? PrimitiveType::kBox : PrimitiveType::kCavity;
      p.world_from_primitive = PoseFrom(v, 6);
      p.half_extents = Vec3(v[3], v[4], v[5]);
      plan.spec.primitives.push_back(p);
    } else if (key == "plane") {
      expect({3, 6});
      Primitive p;
      p.type = PrimitiveType::kPlane;
      p.world_from_primitive = PoseFrom(v, 3);
      plan.spec.primitives.push_back(p);
    } else if (key == "bounds") {
      expect({6});
      plan.spec.bounds = AxisAlignedBox{Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
    } else {
      Fail(line, "unknown directive '" + key + "'");
    }
  }
  for (Viewpoint& vp : plan.viewpoints) {
    if (vp.half_extent.x() < 0.0) vp.half_extent = plan.default_extent;
    if (!(vp.half_extent.minCoeff() > 0.0)) {
      throw Error(ErrorCode::kDegenerate, "viewpoint '" + vp.name + "' has zero extent");
    }
  }
  if (!(plan.voxel_size > 0.0) || !(plan.max_distance > 0.0) ||
      plan.inside_band < 0.0 || plan.noise_sigma < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid scene scalar parameters");
  }
  plan.spec.Validate();
  return plan;
}

ScenePlan ReadScenePlan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scene file " + path.string());
  return ParseScenePlan(in);
}

SdfSubmap CarveSubmap(const ScenePlan& plan, size_t viewpoint_index) {
  const Viewpoint& vp = plan.viewpoints.at(viewpoint_index);
  const double vs = plan.voxel_size;
  SdfSubmap submap(static_cast<int>(viewpoint_index), vs, plan.inside_band,
                   vp.world_from_view);
  const VoxelIndex lo = VoxelContaining(-vp.half_extent, vs);
  const VoxelIndex hi = VoxelContaining(vp.half_extent, vs);
  std::mt19937_64 rng(SplitMix64(plan.seed + SplitMix64(viewpoint_index)));
  std::normal_distribution<double> noise(0.0, plan.noise_sigma);
  for (int32_t z = lo.z; z <= hi.z; ++z) {
    for (int32_t y = lo.y; y <= hi.y; ++y) {
      for (int32_t x = lo.x; x <= hi.x; ++x) {
        const VoxelIndex v{x, y, z};
        const Vec3 c = VoxelCenter(v, vs);
        if ((c.cwiseAbs() - vp.half_extent).maxCoeff() > 0.0) continue;
        const Vec3 w = vp.world_from_view * c;
        if (plan.spec.bounds &&
            ((w - plan.spec.bounds->max).maxCoeff() > 0.0 ||
             (plan.spec.bounds->min - w).maxCoeff() > 0.0)) {
          continue;
        }
        const double phi = plan.spec.SignedDistance(w);
        if (phi < -plan.inside_band || phi > plan.max_distance) continue;
        const double value = plan.noise_sigma > 0.0 ? phi + noise(rng) : phi;
        submap.voxels().Set(v, {static_cast<float>(value), 1.f});
      }
    }
  }
  if (submap.empty()) {
    throw Error(ErrorCode::kInsufficientData, "viewpoint '" + vp.name + "' carves nothing");
  }
  return submap;
}

std::vector<SdfSubmap> CarveSubmaps(const ScenePlan& plan, int num_threads) {
  if (plan.viewpoints.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scene has no viewpoints");
  }
  std::vector<SdfSubmap> out(plan.viewpoints.size());
  ParallelFor(out.size(), num_threads, [&](size_t i) { out[i] = CarveSubmap(plan, i); });
  return out;
}

RigidTransform RelativeTransform(const SdfSubmap& a, const SdfSubmap& b) {
  return b.world_from_submap().Inverse() * a.world_from_submap();
}

double OverlapVolume(const SdfSubmap& a, const SdfSubmap& b,
                     const RigidTransform& b_from_a) {
  size_t count = 0;
  a.voxels().ForEach([&](const VoxelIndex& v, const SdfVoxel&) {
    if (b.voxels().Contains(b.IndexOf(b_from_a * a.Center(v)))) ++count;
  });
  const double vs = a.voxel_size();
  return double(count) * vs * vs * vs;
}

std::filesystem::path DataDirectory() {
  if (const char* env = std::getenv("SDFLOC_DATA_DIR")) return env;
#ifdef SDFLOC_DATA_DIR
  return SDFLOC_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace sdfloc
