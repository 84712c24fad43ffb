#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "boot3d/error.hpp"
#include "boot3d/face_frame.hpp"
#include "boot3d/rigid_transform.hpp"
#include "boot3d/synthetic_face.hpp"
#include "test_support.hpp"

using namespace boot3d;
using namespace boot3d::testing;

namespace {

TriangleMesh cloud(std::vector<Vec3> points) {
  TriangleMesh mesh;
  mesh.vertices = std::move(points);
  return mesh;
}

}  // namespace

TEST_CASE("sample covariance of the unit cross is (2/5) I") {
  const TriangleMesh mesh = cloud({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0},
                                   {0, 0, 1}, {0, 0, -1}});
  const auto [centroid, cov] = sample_covariance(mesh);
  CHECK(centroid.norm() < 1e-15);
  CHECK((cov - 0.4 * Mat3::Identity()).norm() < 1e-15);
}

TEST_CASE("sample covariance is translation invariant") {
  TriangleMesh mesh = make_icosphere(1.0, 1);
  // Break the isotropy a bit.
  for (size_t i = 0; i < mesh.vertices.size(); ++i) mesh.vertices[i][1] *= 2.0;
  const auto [c0, cov0] = sample_covariance(mesh);

  const Vec3 t(3.5, -1.25, 0.75);
  TriangleMesh moved = mesh;
  for (Vec3& v : moved.vertices) v += t;
  const auto [c1, cov1] = sample_covariance(moved);

  CHECK((c1 - (c0 + t)).norm() < 1e-12);
  CHECK((cov1 - cov0).norm() < 1e-12);
}

TEST_CASE("sample covariance rejects tiny and rank-deficient clouds") {
  CHECK_THROWS_AS(sample_covariance(cloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}})), Error);
  // Coplanar cloud.
  CHECK_THROWS_AS(
      sample_covariance(cloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 3, 0}})),
      Error);
}

TEST_CASE("ellipsoid cloud: top eigenvector tracks the long axis") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec3> points;
  for (int i = 0; i < 4000; ++i) {
    Vec3 dir(normal(rng), normal(rng), normal(rng));
    dir.normalize();
    points.push_back(Vec3(1.0 * dir[0], 2.0 * dir[1], 0.3 * dir[2]));
  }
  const auto [centroid, cov] = sample_covariance(cloud(std::move(points)));
  const auto eig = eigen_symmetric3(cov);
  const double angle = angle_between_deg(eig[0].vector, Vec3::UnitY());
  CHECK(std::min(angle, 180.0 - angle) < 1.0);
}

TEST_CASE("eigen_symmetric3 on diagonal and identity matrices") {
  const auto eig = eigen_symmetric3(Vec3(3, 2, 1).asDiagonal());
  CHECK(eig[0].value == doctest::Approx(3.0));
  CHECK(eig[1].value == doctest::Approx(2.0));
  CHECK(eig[2].value == doctest::Approx(1.0));
  CHECK(std::abs(eig[0].vector.dot(Vec3::UnitX())) == doctest::Approx(1.0));
  CHECK(std::abs(eig[1].vector.dot(Vec3::UnitY())) == doctest::Approx(1.0));
  CHECK(std::abs(eig[2].vector.dot(Vec3::UnitZ())) == doctest::Approx(1.0));

  const auto iso = eigen_symmetric3(Mat3::Identity());
  for (int k = 0; k < 3; ++k) CHECK(iso[k].value == doctest::Approx(1.0));
  Mat3 basis;
  for (int k = 0; k < 3; ++k) basis.col(k) = iso[k].vector;
  CHECK((basis.transpose() * basis - Mat3::Identity()).norm() < 1e-10);
}

TEST_CASE("eigen_symmetric3 reconstructs random symmetric matrices") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat3 raw;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) raw(r, c) = normal(rng);
    const Mat3 sym = 0.5 * (raw + raw.transpose());
    const auto eig = eigen_symmetric3(sym);

    Mat3 v, lambda = Mat3::Zero();
    for (int k = 0; k < 3; ++k) {
      v.col(k) = eig[k].vector;
      lambda(k, k) = eig[k].value;
    }
    CHECK((v * lambda * v.transpose() - sym).norm() < 1e-9);
    CHECK((v.transpose() * v - Mat3::Identity()).norm() < 1e-10);
    CHECK(eig[0].value >= eig[1].value);
    CHECK(eig[1].value >= eig[2].value);
    for (int k = 0; k < 3; ++k)
      CHECK((sym * eig[k].vector - eig[k].value * eig[k].vector).norm() <=
            1e-10 * std::max(1.0, sym.norm()));
  }
}

TEST_CASE("symmetry_score: exact plane scores zero, rotated planes score worse") {
  const TriangleMesh face = generate_synthetic_face(random_face_spec(5));
  const Vec3 centroid = mesh_centroid(face);

  const double true_score = symmetry_score(face, centroid, Vec3::UnitX());
  CHECK(true_score < 1e-9);

  const Mat3 tilt = Eigen::AngleAxisd(deg_to_rad(30.0), Vec3::UnitY()).toRotationMatrix();
  const double tilted_score = symmetry_score(face, centroid, tilt * Vec3::UnitX());
  CHECK(tilted_score > true_score);
  CHECK(tilted_score > 1e-3);
}

TEST_CASE("symmetry_score: planes through a sphere's center are symmetric") {
  // The coordinate planes are exact mirror symmetries of the icosphere's
  // vertex set, so the nearest-vertex score vanishes outright.
  const TriangleMesh sphere = make_icosphere(1.0, 4);
  CHECK(symmetry_score(sphere, Vec3::Zero(), Vec3::UnitX()) < 1e-9);
  CHECK(symmetry_score(sphere, Vec3::Zero(), Vec3::UnitY()) < 1e-9);
  CHECK(symmetry_score(sphere, Vec3::Zero(), Vec3::UnitZ()) < 1e-9);

  // Generic planes only see the tessellation: the score is bounded by the
  // vertex spacing and halves with each subdivision.
  std::mt19937_64 rng(3);
  const Vec3 n = random_rotation(rng) * Vec3::UnitX();
  const double coarse = symmetry_score(make_icosphere(1.0, 3), Vec3::Zero(), n);
  const double fine = symmetry_score(sphere, Vec3::Zero(), n);
  CHECK(fine < 0.01);
  CHECK(fine < 0.7 * coarse);
}

TEST_CASE("symmetry_score: true plane beats random perturbations of 5 degrees or more") {
  const TriangleMesh face = generate_synthetic_face(random_face_spec(21));
  const Vec3 centroid = mesh_centroid(face);
  const double true_score = symmetry_score(face, centroid, Vec3::UnitX());

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uangle(5.0, 60.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vec3 axis(normal(rng), normal(rng), normal(rng));
    axis -= axis.dot(Vec3::UnitX()) * Vec3::UnitX();  // rotate the normal away
    axis.normalize();
    const Mat3 r = Eigen::AngleAxisd(deg_to_rad(uangle(rng)), axis).toRotationMatrix();
    CHECK(symmetry_score(face, centroid, r * Vec3::UnitX()) > true_score);
  }
}

TEST_CASE("estimate_face_frame recovers the canonical frame of oracle faces") {
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    const TriangleMesh face = generate_synthetic_face(random_face_spec(seed));
    const FaceFrame frame = estimate_face_frame(face);
    CHECK(angle_between_deg(frame.lateral, Vec3::UnitX()) < 2.0);
    CHECK(angle_between_deg(frame.vertical, Vec3::UnitY()) < 2.0);
    CHECK(angle_between_deg(frame.gaze, Vec3::UnitZ()) < 2.0);

    // Orthonormal right-handed invariants.
    CHECK(std::abs(frame.lateral.dot(frame.vertical)) < 1e-9);
    CHECK(std::abs(frame.lateral.dot(frame.gaze)) < 1e-9);
    CHECK((frame.lateral.cross(frame.vertical) - frame.gaze).norm() < 1e-9);
    CHECK(frame.eigenvalues[0] >= frame.eigenvalues[1]);
    CHECK(frame.eigenvalues[1] >= frame.eigenvalues[2]);
    CHECK(frame.eigenvalues[2] >= 0.0);
  }
}

TEST_CASE("estimate_face_frame is equivariant under rigid motion") {
  const TriangleMesh face = generate_synthetic_face(random_face_spec(9));
  const FaceFrame base = estimate_face_frame(face);

  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 8; ++trial) {
    RigidTransform t;
    t.rotation = random_rotation(rng);
    t.translation = Vec3(0.3, -1.0, 2.0);
    const FaceFrame moved = estimate_face_frame(apply_transform(face, t));
    CHECK((moved.lateral - t.rotation * base.lateral).norm() < 1e-6);
    CHECK((moved.vertical - t.rotation * base.vertical).norm() < 1e-6);
    CHECK((moved.gaze - t.rotation * base.gaze).norm() < 1e-6);
    CHECK((moved.centroid - t.apply(base.centroid)).norm() < 1e-9);
  }
}

TEST_CASE("estimate_face_frame is scale invariant") {
  const TriangleMesh face = generate_synthetic_face(random_face_spec(13));
  const FaceFrame base = estimate_face_frame(face);
  TriangleMesh scaled = face;
  for (Vec3& v : scaled.vertices) v *= 3.7;
  const FaceFrame big = estimate_face_frame(scaled);
  CHECK((big.lateral - base.lateral).norm() < 1e-9);
  CHECK((big.vertical - base.vertical).norm() < 1e-9);
  CHECK((big.gaze - base.gaze).norm() < 1e-9);
}

TEST_CASE("estimate_face_frame flags isotropic clouds instead of guessing") {
  const TriangleMesh sphere = make_icosphere(1.0, 3);
  bool flagged = false;
  try {
    flagged = estimate_face_frame(sphere).eigen_tie;
  } catch (const Error& e) {
    flagged = e.code() == ErrorCode::degenerate_input;
  }
  CHECK(flagged);
}

TEST_CASE("face frame CSV row round trip") {
  const TriangleMesh face = generate_synthetic_face(random_face_spec(30));
  const FaceFrame frame = estimate_face_frame(face);
  const FaceFrame back = face_frame_from_csv_row(face_frame_csv_row(frame));
  CHECK((back.centroid - frame.centroid).norm() == 0.0);
  CHECK((back.lateral - frame.lateral).norm() == 0.0);
  CHECK((back.vertical - frame.vertical).norm() == 0.0);
  CHECK((back.gaze - frame.gaze).norm() == 0.0);
}
