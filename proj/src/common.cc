#include "sdfloc/common.h"

#include <algorithm>
#include <cmath>

#include "sdfloc/rigid_transform.h"

namespace sdfloc {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kFormat:
      return "format";
    case ErrorCode::kDegenerate:
      return "degenerate";
    case ErrorCode::kInsufficientData:
      return "insufficient-data";
  }
  return "unknown";
}

VoxelIndex VoxelContaining(const Vec3& p, double voxel_size) {
  return {static_cast<int32_t>(std::floor(p.x() / voxel_size)),
          static_cast<int32_t>(std::floor(p.y() / voxel_size)),
          static_cast<int32_t>(std::floor(p.z() / voxel_size))};
}

bool IsRotation(const Mat3& r, double tolerance) {
  if (!r.allFinite()) return false;
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tolerance && std::abs(r.determinant() - 1.0) <= tolerance;
}

RigidTransform::RigidTransform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!IsRotation(rotation)) {
    throw Error(ErrorCode::kInvalidArgument,
                "rotation is not orthonormal with determinant +1");
  }
  if (!translation.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "translation is not finite");
  }
}

RigidTransform RigidTransform::FromYawPitchRoll(double yaw, double pitch,
                                                double roll,
                                                const Vec3& translation) {
  const Mat3 r = (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                  Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                  Eigen::AngleAxisd(roll, Vec3::UnitX()))
                     .toRotationMatrix();
  return RigidTransform(r, translation);
}

RigidTransform RigidTransform::FromAngleAxis(double angle, const Vec3& axis,
                                             const Vec3& translation) {
  return RigidTransform(
      Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(),
      translation);
}

RigidTransform RigidTransform::operator*(const RigidTransform& other) const {
  return RigidTransform(rotation_ * other.rotation_,
                        rotation_ * other.translation_ + translation_,
                        Unchecked{});
}

RigidTransform RigidTransform::Inverse() const {
  const Mat3 rt = rotation_.transpose();
  return RigidTransform(rt, -(rt * translation_), Unchecked{});
}

double RigidTransform::RotationAngleTo(const RigidTransform& other) const {
  const Mat3 delta = rotation_.transpose() * other.rotation_;
  const double c = std::clamp((delta.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace sdfloc
