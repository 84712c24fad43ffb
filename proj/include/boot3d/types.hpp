#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <limits>

namespace boot3d {

template <class F>
using V3 = Eigen::Matrix<F, 3, 1>;
template <class F>
using M3 = Eigen::Matrix<F, 3, 3>;

using Vec3 = V3<double>;
using Vec3f = V3<float>;
using Vec3i = V3<int>;
using Mat3 = M3<double>;

inline constexpr double kPi = 3.14159265358979323846;

template <class F>
constexpr F deg_to_rad(F deg) {
  return deg * F(kPi) / F(180);
}

template <class F>
constexpr F rad_to_deg(F rad) {
  return rad * F(180) / F(kPi);
}

/// Angle between two (not necessarily unit) vectors, in degrees.
template <class DerivedA, class DerivedB>
double angle_between_deg(const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return rad_to_deg(std::acos(c));
}

}  // namespace boot3d
