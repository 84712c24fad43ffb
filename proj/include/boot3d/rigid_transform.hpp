#pragma once

#include "boot3d/mesh.hpp"
#include "boot3d/types.hpp"

namespace boot3d {

/// Proper rigid motion v -> R v + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& v) const { return rotation * v + translation; }

  static RigidTransform identity() { return {}; }

  /// Rotation by `angle_deg` about `axis` through `center`.
  static RigidTransform about_axis(const Vec3& axis, double angle_deg,
                                   const Vec3& center);
};

RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform inverse(const RigidTransform& t);

/// Throws Error(invalid_input) unless R^T R = I and det R = 1 within 1e-10.
void validate_transform(const RigidTransform& t);

/// Applies the motion to every vertex; connectivity, colors and landmarks
/// carry over untouched.
TriangleMesh apply_transform(const TriangleMesh& mesh, const RigidTransform& t);

}  // namespace boot3d
