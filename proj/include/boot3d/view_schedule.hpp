#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boot3d/face_frame.hpp"
#include "boot3d/rigid_transform.hpp"

namespace boot3d {

/// The camera is fixed on +z looking along -z with y up; the face-to-camera
/// direction is therefore +z. Yaw rotates about the camera y axis, pitch
/// about the camera x axis, both through the mesh centroid.
inline const Vec3 kCameraAxis = Vec3::UnitZ();
inline const Vec3 kCameraUp = Vec3::UnitY();

struct ViewEntry {
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  RigidTransform transform;
};

struct ViewSchedule {
  std::vector<ViewEntry> entries;
  double increment_deg = 10.0;
  double pitch_limit_deg = 20.0;
  double gaze_limit_deg = 90.0;
};

/// Every (yaw, pitch) lattice point at the given increment whose
/// post-transform gaze stays within gaze_limit of the camera direction and
/// whose |pitch| stays within pitch_limit; (0, 0) is excluded. When
/// `yaw_set` is given only those yaws are used, crossed with the pitch
/// lattice. Ordering is yaw-major ascending, pitch ascending.
ViewSchedule build_schedule(const FaceFrame& frame, double increment_deg = 10.0,
                            double pitch_limit_deg = 20.0, double gaze_limit_deg = 90.0,
                            const std::optional<std::vector<double>>& yaw_set = std::nullopt);

/// Rotation by (yaw, pitch) about the camera axes through `center`.
RigidTransform view_rotation(double yaw_deg, double pitch_deg, const Vec3& center);

/// CSV with header: yaw_deg, pitch_deg, 9 rotation entries row-major, 3
/// translation entries.
void write_schedule_csv(const std::string& path, const ViewSchedule& schedule);
ViewSchedule read_schedule_csv(const std::string& path);

}  // namespace boot3d
