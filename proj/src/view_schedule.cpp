#include "boot3d/view_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "boot3d/error.hpp"

namespace boot3d {

RigidTransform view_rotation(double yaw_deg, double pitch_deg, const Vec3& center) {
  // Pitch first, then yaw, both in fixed camera axes.
  const Mat3 r = (Eigen::AngleAxisd(deg_to_rad(yaw_deg), kCameraUp) *
                  Eigen::AngleAxisd(deg_to_rad(pitch_deg), Vec3::UnitX()))
                     .toRotationMatrix();
  RigidTransform t;
  t.rotation = r;
  t.translation = center - r * center;
  return t;
}

ViewSchedule build_schedule(const FaceFrame& frame, double increment_deg,
                            double pitch_limit_deg, double gaze_limit_deg,
                            const std::optional<std::vector<double>>& yaw_set) {
  if (!(increment_deg > 0.0))
    throw_error(ErrorCode::invalid_config, "build_schedule: increment must be > 0");
  if (pitch_limit_deg < 0.0 || gaze_limit_deg < 0.0)
    throw_error(ErrorCode::invalid_config, "build_schedule: negative limit");

  std::vector<double> yaws;
  if (yaw_set) {
    yaws = *yaw_set;
    std::sort(yaws.begin(), yaws.end());
  } else {
    // Full lattice in (-180, 180]; the gaze constraint prunes it below.
    const int steps = static_cast<int>(std::floor(180.0 / increment_deg));
    for (int k = -steps; k <= steps; ++k) {
      const double yaw = k * increment_deg;
      if (yaw <= -180.0) continue;
      yaws.push_back(yaw);
    }
  }

  std::vector<double> pitches;
  const int psteps = static_cast<int>(std::floor(pitch_limit_deg / increment_deg + 1e-9));
  for (int k = -psteps; k <= psteps; ++k) pitches.push_back(k * increment_deg);

  ViewSchedule schedule;
  schedule.increment_deg = increment_deg;
  schedule.pitch_limit_deg = pitch_limit_deg;
  schedule.gaze_limit_deg = gaze_limit_deg;

  for (double yaw : yaws) {
    for (double pitch : pitches) {
      if (yaw == 0.0 && pitch == 0.0) continue;  // the seed pair is not new data
      const RigidTransform t = view_rotation(yaw, pitch, frame.centroid);
      const double gaze_angle = angle_between_deg(t.rotation * frame.gaze, kCameraAxis);
      if (gaze_angle > gaze_limit_deg + 1e-9) continue;
      schedule.entries.push_back({yaw, pitch, t});
    }
  }
  return schedule;
}

void write_schedule_csv(const std::string& path, const ViewSchedule& schedule) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  out << "yaw_deg,pitch_deg,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz\n";
  char buf[32];
  for (const ViewEntry& e : schedule.entries) {
    std::string row;
    auto push = [&](double v) {
      if (!row.empty()) row += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      row += buf;
    };
    push(e.yaw_deg);
    push(e.pitch_deg);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) push(e.transform.rotation(r, c));
    for (int k = 0; k < 3; ++k) push(e.transform.translation[k]);
    out << row << '\n';
  }
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

ViewSchedule read_schedule_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::io_failure, "cannot open: " + path);
  ViewSchedule schedule;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double vals[14];
    std::string item;
    for (int k = 0; k < 14; ++k) {
      if (!std::getline(ss, item, ','))
        throw_error(ErrorCode::io_failure, "bad schedule row in " + path);
      vals[k] = std::stod(item);
    }
    ViewEntry e;
    e.yaw_deg = vals[0];
    e.pitch_deg = vals[1];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) e.transform.rotation(r, c) = vals[2 + 3 * r + c];
    for (int k = 0; k < 3; ++k) e.transform.translation[k] = vals[11 + k];
    validate_transform(e.transform);
    schedule.entries.push_back(e);
  }
  return schedule;
}

}  // namespace boot3d
