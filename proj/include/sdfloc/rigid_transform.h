#pragma once

#include <Eigen/Geometry>

#include "sdfloc/common.h"

namespace sdfloc {

// Rotation + translation. Naming convention used throughout: `b_from_a`
// maps coordinates expressed in frame a into frame b (p_b = b_from_a * p_a).
class RigidTransform {
 public:
  RigidTransform() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

  // Throws kInvalidArgument unless rotation is orthonormal with det +1
  // (tolerance 1e-9).
  RigidTransform(const Mat3& rotation, const Vec3& translation);

  static RigidTransform Identity() { return {}; }
  // Intrinsic Z-Y-X (yaw, pitch, roll) in radians.
  static RigidTransform FromYawPitchRoll(double yaw, double pitch, double roll,
                                         const Vec3& translation);
  static RigidTransform FromAngleAxis(double angle, const Vec3& axis,
                                      const Vec3& translation);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 operator*(const Vec3& p) const { return rotation_ * p + translation_; }
  RigidTransform operator*(const RigidTransform& other) const;
  RigidTransform Inverse() const;

  // Angle of the relative rotation, radians.
  double RotationAngleTo(const RigidTransform& other) const;
  double TranslationDistanceTo(const RigidTransform& other) const {
    return (translation_ - other.translation_).norm();
  }

 private:
  struct Unchecked {};
  RigidTransform(const Mat3& rotation, const Vec3& translation, Unchecked)
      : rotation_(rotation), translation_(translation) {}

  Mat3 rotation_;
  Vec3 translation_;
};

bool IsRotation(const Mat3& r, double tolerance = 1e-9);

}  // namespace sdfloc
