#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "boot3d/error.hpp"
#include "boot3d/synthetic_face.hpp"
#include "boot3d/view_schedule.hpp"
#include "test_support.hpp"

using namespace boot3d;
using namespace boot3d::testing;

TEST_CASE("apply_transform: identity, rotation group, inverse") {
  const TriangleMesh mesh = generate_synthetic_face(random_face_spec(2));

  const TriangleMesh same = apply_transform(mesh, RigidTransform::identity());
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    CHECK(same.vertices[i] == mesh.vertices[i]);
  CHECK(same.landmarks == mesh.landmarks);
  CHECK(same.vertex_colors == mesh.vertex_colors);

  const Vec3 center = mesh_centroid(mesh);
  const RigidTransform yaw90 = view_rotation(90.0, 0.0, center);
  TriangleMesh turned = mesh;
  for (int k = 0; k < 4; ++k) turned = apply_transform(turned, yaw90);
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    CHECK((turned.vertices[i] - mesh.vertices[i]).norm() < 1e-9);

  std::mt19937_64 rng(10);
  RigidTransform t;
  t.rotation = random_rotation(rng);
  t.translation = Vec3(0.4, 0.1, -0.7);
  const TriangleMesh round = apply_transform(apply_transform(mesh, t), inverse(t));
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    CHECK((round.vertices[i] - mesh.vertices[i]).norm() < 1e-9);
}

TEST_CASE("apply_transform preserves pairwise distances") {
  const TriangleMesh mesh = make_icosphere(0.8, 2);
  std::mt19937_64 rng(4);
  RigidTransform t;
  t.rotation = random_rotation(rng);
  t.translation = Vec3(5, -2, 1);
  const TriangleMesh moved = apply_transform(mesh, t);
  std::uniform_int_distribution<size_t> pick(0, mesh.vertices.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t a = pick(rng), b = pick(rng);
    const double before = (mesh.vertices[a] - mesh.vertices[b]).norm();
    const double after = (moved.vertices[a] - moved.vertices[b]).norm();
    CHECK(std::abs(before - after) < 1e-9);
  }
}

TEST_CASE("compose and inverse satisfy the group laws") {
  std::mt19937_64 rng(11);
  RigidTransform t;
  t.rotation = random_rotation(rng);
  t.translation = Vec3(1, 2, 3);

  const RigidTransform ident = compose(t, inverse(t));
  CHECK((ident.rotation - Mat3::Identity()).norm() < 1e-10);
  CHECK(ident.translation.norm() < 1e-10);

  const RigidTransform same = compose(RigidTransform::identity(), t);
  CHECK((same.rotation - t.rotation).norm() == 0.0);
  CHECK((same.translation - t.translation).norm() == 0.0);

  // Yaw angles about a shared axis/center add up.
  const Vec3 center(0.2, -0.4, 0.1);
  const RigidTransform sum =
      compose(view_rotation(20.0, 0.0, center), view_rotation(30.0, 0.0, center));
  const RigidTransform direct = view_rotation(50.0, 0.0, center);
  CHECK((sum.rotation - direct.rotation).norm() < 1e-10);
  CHECK((sum.translation - direct.translation).norm() < 1e-10);

  validate_transform(sum);
}

TEST_CASE("build_schedule: frontal frame spans +/-90 yaw with pitch capped") {
  FaceFrame frame;  // canonical: gaze = +z toward the camera
  const ViewSchedule schedule = build_schedule(frame, 10.0, 20.0, 90.0);

  CHECK(!schedule.entries.empty());
  double min_yaw = 1e9, max_yaw = -1e9;
  for (const ViewEntry& e : schedule.entries) {
    CHECK(std::abs(e.pitch_deg) <= 20.0);
    CHECK(std::fmod(std::abs(e.yaw_deg), 10.0) == doctest::Approx(0.0));
    CHECK(std::fmod(std::abs(e.pitch_deg), 10.0) == doctest::Approx(0.0));
    CHECK(!(e.yaw_deg == 0.0 && e.pitch_deg == 0.0));
    const double gaze_angle =
        angle_between_deg(e.transform.rotation * frame.gaze, kCameraAxis);
    CHECK(gaze_angle <= 90.0 + 1e-9);
    min_yaw = std::min(min_yaw, e.yaw_deg);
    max_yaw = std::max(max_yaw, e.yaw_deg);
  }
  CHECK(max_yaw == doctest::Approx(90.0));
  CHECK(min_yaw == doctest::Approx(-90.0));

  // Deterministic ordering: yaw-major ascending, pitch ascending.
  for (size_t i = 1; i < schedule.entries.size(); ++i) {
    const ViewEntry& a = schedule.entries[i - 1];
    const ViewEntry& b = schedule.entries[i];
    CHECK((a.yaw_deg < b.yaw_deg || (a.yaw_deg == b.yaw_deg && a.pitch_deg < b.pitch_deg)));
  }
}

TEST_CASE("build_schedule: explicit yaw set with zero pitch budget") {
  FaceFrame frame;
  const ViewSchedule schedule =
      build_schedule(frame, 10.0, 0.0, 90.0, std::vector<double>{-20.0, 20.0});
  REQUIRE(schedule.entries.size() == 2);
  CHECK(schedule.entries[0].yaw_deg == -20.0);
  CHECK(schedule.entries[1].yaw_deg == 20.0);
  CHECK(schedule.entries[0].pitch_deg == 0.0);
}

TEST_CASE("build_schedule: pre-rotated gaze shifts the feasible yaw window") {
  FaceFrame frame;
  frame.gaze = view_rotation(30.0, 0.0, Vec3::Zero()).rotation * Vec3::UnitZ();
  frame.lateral = view_rotation(30.0, 0.0, Vec3::Zero()).rotation * Vec3::UnitX();
  frame.vertical = Vec3::UnitY();

  const ViewSchedule schedule = build_schedule(frame, 10.0, 0.0, 90.0);
  double min_yaw = 1e9, max_yaw = -1e9;
  for (const ViewEntry& e : schedule.entries) {
    min_yaw = std::min(min_yaw, e.yaw_deg);
    max_yaw = std::max(max_yaw, e.yaw_deg);
  }
  // Oracle: total gaze angle = 30 + yaw must stay within +/-90.
  CHECK(max_yaw == doctest::Approx(60.0));
  CHECK(min_yaw == doctest::Approx(-120.0));
}

TEST_CASE("build_schedule rejects bad increments") {
  CHECK_THROWS_AS(build_schedule(FaceFrame{}, 0.0), Error);
  CHECK_THROWS_AS(build_schedule(FaceFrame{}, -10.0), Error);
}

TEST_CASE("schedule CSV round trip") {
  namespace fs = std::filesystem;
  const ViewSchedule schedule = build_schedule(FaceFrame{}, 10.0, 10.0, 90.0);
  const fs::path path = fs::temp_directory_path() / "boot3d_schedule.csv";
  write_schedule_csv(path.string(), schedule);
  const ViewSchedule back = read_schedule_csv(path.string());
  REQUIRE(back.entries.size() == schedule.entries.size());
  for (size_t i = 0; i < back.entries.size(); ++i) {
    CHECK(back.entries[i].yaw_deg == schedule.entries[i].yaw_deg);
    CHECK(back.entries[i].pitch_deg == schedule.entries[i].pitch_deg);
    CHECK((back.entries[i].transform.rotation - schedule.entries[i].transform.rotation)
              .norm() == 0.0);
    CHECK((back.entries[i].transform.translation -
           schedule.entries[i].transform.translation)
              .norm() == 0.0);
  }
  fs::remove(path);
}
