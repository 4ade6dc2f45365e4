#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sdfloc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Categories map onto CLI exit codes.
enum class ErrorCode : int {
  kInvalidArgument = 2,
  kIo = 3,
  kFormat = 4,
  kDegenerate = 5,
  kInsufficientData = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* ErrorCodeName(ErrorCode code);

// Integer grid coordinate. Ordering is lexicographic (x, then y, then z).
struct VoxelIndex {
  int32_t x = 0;
  int32_t y = 0;
  int32_t z = 0;

  auto operator<=>(const VoxelIndex&) const = default;

  VoxelIndex operator+(const VoxelIndex& o) const {
    return {x + o.x, y + o.y, z + o.z};
  }
  VoxelIndex operator-(const VoxelIndex& o) const {
    return {x - o.x, y - o.y, z - o.z};
  }
  int32_t operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  int32_t& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }
};

// Bijective for every component in (-2^20, 2^20).
constexpr int kHashBitsPerAxis = 21;
constexpr int32_t kHashAxisOffset = 1 << 20;

inline uint64_t VoxelKey(const VoxelIndex& v) {
  constexpr uint64_t mask = (uint64_t{1} << kHashBitsPerAxis) - 1;
  const uint64_t x = static_cast<uint64_t>(v.x + kHashAxisOffset) & mask;
  const uint64_t y = static_cast<uint64_t>(v.y + kHashAxisOffset) & mask;
  const uint64_t z = static_cast<uint64_t>(v.z + kHashAxisOffset) & mask;
  return x | (y << kHashBitsPerAxis) | (z << (2 * kHashBitsPerAxis));
}

inline VoxelIndex VoxelFromKey(uint64_t key) {
  constexpr uint64_t mask = (uint64_t{1} << kHashBitsPerAxis) - 1;
  return {static_cast<int32_t>(key & mask) - kHashAxisOffset,
          static_cast<int32_t>((key >> kHashBitsPerAxis) & mask) -
              kHashAxisOffset,
          static_cast<int32_t>((key >> (2 * kHashBitsPerAxis)) & mask) -
              kHashAxisOffset};
}

struct VoxelIndexHash {
  size_t operator()(const VoxelIndex& v) const {
    // splitmix64 finalizer over the packed key
    uint64_t z = VoxelKey(v) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<size_t>(z ^ (z >> 31));
  }
};

// Center-of-voxel convention: p = voxel_size * (index + 0.5).
inline Vec3 VoxelCenter(const VoxelIndex& v, double voxel_size) {
  return {voxel_size * (v.x + 0.5), voxel_size * (v.y + 0.5),
          voxel_size * (v.z + 0.5)};
}

VoxelIndex VoxelContaining(const Vec3& p, double voxel_size);

// Seed mixer for deriving independent generator seeds.
uint64_t SplitMix64(uint64_t x);

}  // namespace sdfloc
