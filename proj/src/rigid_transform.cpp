#include "boot3d/rigid_transform.hpp"

#include "boot3d/error.hpp"

namespace boot3d {

RigidTransform RigidTransform::about_axis(const Vec3& axis, double angle_deg,
                                          const Vec3& center) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(deg_to_rad(angle_deg), axis.normalized()).toRotationMatrix();
  t.translation = center - t.rotation * center;
  return t;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  // (a ∘ b)(v) = a(b(v))
  RigidTransform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

RigidTransform inverse(const RigidTransform& t) {
  RigidTransform out;
  out.rotation = t.rotation.transpose();
  out.translation = -(out.rotation * t.translation);
  return out;
}

void validate_transform(const RigidTransform& t) {
  if (!t.rotation.allFinite() || !t.translation.allFinite())
    throw_error(ErrorCode::invalid_input, "transform has non-finite entries");
  const double ortho = (t.rotation.transpose() * t.rotation - Mat3::Identity()).norm();
  if (ortho > 1e-10)
    throw_error(ErrorCode::invalid_input, "rotation is not orthonormal");
  if (std::abs(t.rotation.determinant() - 1.0) > 1e-10)
    throw_error(ErrorCode::invalid_input, "rotation is not proper (det != 1)");
}

TriangleMesh apply_transform(const TriangleMesh& mesh, const RigidTransform& t) {
  TriangleMesh out = mesh;
  for (Vec3& v : out.vertices) v = t.apply(v);
  return out;
}

}  // namespace boot3d
