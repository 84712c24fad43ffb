#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "boot3d/error.hpp"
#include "boot3d/experiments.hpp"
#include "boot3d/face_frame.hpp"
#include "boot3d/marching_cubes.hpp"
#include "boot3d/metrics.hpp"
#include "boot3d/render.hpp"
#include "boot3d/synthetic_face.hpp"
#include "boot3d/toy_regressor.hpp"
#include "boot3d/voxelize.hpp"
#include "test_support.hpp"

using namespace boot3d;
using namespace boot3d::testing;

namespace {

Aabb volume_box() {
  Aabb box;
  box.min = Vec3::Constant(-1.15);
  box.max = Vec3::Constant(1.15);
  return box;
}

Camera face_camera() {
  Camera cam;
  cam.half_w = 1.2;
  cam.half_h = 1.2;
  cam.image_width = 64;
  cam.image_height = 64;
  cam.near = -4.0;
  cam.far = 4.0;
  return cam;
}

}  // namespace

TEST_CASE("synthetic faces are exactly mirror symmetric with valid landmarks") {
  for (uint64_t seed : {0ull, 3ull, 9ull, 40ull}) {
    const TriangleMesh face = generate_synthetic_face(random_face_spec(seed));
    validate_mesh(face);
    CHECK(symmetry_score(face, mesh_centroid(face), Vec3::UnitX()) < 1e-9);
    CHECK(face.has_landmark("eye_outer_left"));
    CHECK(face.has_landmark("eye_outer_right"));
    CHECK(face.has_landmark("nose_tip"));
    CHECK(face.has_colors());

    // Shallow along +z: the smallest covariance axis is the gaze.
    const auto [centroid, cov] = sample_covariance(face);
    const auto eig = eigen_symmetric3(cov);
    const double angle = angle_between_deg(eig[2].vector, Vec3::UnitZ());
    CHECK(std::min(angle, 180.0 - angle) < 2.0);
  }
}

TEST_CASE("synthetic face generation is deterministic and validates ranges") {
  const TriangleMesh a = generate_synthetic_face(random_face_spec(123));
  const TriangleMesh b = generate_synthetic_face(random_face_spec(123));
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (size_t i = 0; i < a.vertices.size(); ++i) CHECK(a.vertices[i] == b.vertices[i]);
  CHECK(a.vertex_colors == b.vertex_colors);

  SyntheticFaceSpec bad = random_face_spec(1);
  bad.nose_width = 0.5;
  CHECK_THROWS_AS(generate_synthetic_face(bad), Error);

  // Every legal face stays inside the documented half extents.
  const Vec3 half = synthetic_face_half_extent();
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Aabb box = mesh_bounds(generate_synthetic_face(random_face_spec(seed)));
    CHECK((box.min.array() >= -half.array() - 1e-9).all());
    CHECK((box.max.array() <= half.array() + 1e-9).all());
  }
}

TEST_CASE("oracle reconstructor: registered round trip, unknown ids, distinct grids") {
  const FaceSample face = make_face_bank(500, 1).front();
  OracleReconstructor oracle(Vec3i::Constant(48), volume_box(), 3);
  oracle.register_mesh("front", face.mesh);

  Image img(8, 8);
  img.id = "front";
  const VoxelGrid grid = oracle.reconstruct(img);
  const TriangleMesh mesh = marching_cubes(grid, 0.5);
  REQUIRE(!mesh.vertices.empty());

  // Round-trip NME below 0.5% of the interocular normalizer.
  const double d = interocular_distance(face.mesh);
  CHECK(nme(mesh, face.mesh, d) < 0.005);

  Image unknown(8, 8);
  unknown.id = "stranger";
  CHECK_THROWS_AS(oracle.reconstruct(unknown), Error);

  const FaceSample other = make_face_bank(501, 1).front();
  oracle.register_mesh("other", other.mesh);
  Image img2(8, 8);
  img2.id = "other";
  CHECK(oracle.reconstruct(img2).values() != grid.values());
}

TEST_CASE("untrained toy regressor predicts uniform 0.5 occupancy") {
  const ToyRegressor model(8, 8, Vec3i::Constant(6), volume_box());
  const VoxelGrid grid = model.reconstruct(Image(16, 16, Vec3f(0.3f, 0.3f, 0.3f)));
  for (float v : grid.values()) CHECK(v == doctest::Approx(0.5f));
}

TEST_CASE("toy regressor overfits a single pair") {
  const FaceSample face = make_face_bank(600, 1).front();
  const Camera cam = face_camera();
  const RenderedSample view = render_face_view(face, 0.0, 0.0, cam);

  const Vec3i dims = Vec3i::Constant(16);
  TrainingSample sample;
  sample.image = view.image;
  sample.target = voxelize(view.gt, dims, volume_box());

  ToyRegressor model(16, 16, dims, volume_box());
  LrSchedule lr;
  lr.initial = 1.0;
  lr.decay_period_epochs = 0;  // constant
  const std::vector<const TrainingSample*> batch = {&sample};
  const double initial_loss = model.batch_loss(batch);
  CHECK(initial_loss == doctest::Approx(std::log(2.0)).epsilon(1e-6));

  for (int step = 0; step < 200; ++step) model.fit_step(batch, lr.initial);
  CHECK(model.batch_loss(batch) < 0.1 * initial_loss);

  // The extracted surface lands within 3% (of the bbox diagonal) of the target.
  const TriangleMesh pred = marching_cubes(model.reconstruct(sample.image), 0.5);
  REQUIRE(!pred.vertices.empty());
  const double diag = mesh_bounds(view.gt).diagonal();
  CHECK(nme(pred, view.gt, diag) < 0.03);
}

TEST_CASE("fit_step with zero learning rate leaves the model untouched") {
  const FaceSample face = make_face_bank(601, 1).front();
  const RenderedSample view = render_face_view(face, 0.0, 0.0, face_camera());
  TrainingSample sample;
  sample.image = view.image;
  sample.target = voxelize(view.gt, Vec3i::Constant(8), volume_box());

  ToyRegressor model(8, 8, Vec3i::Constant(8), volume_box());
  const std::vector<double> before = model.snapshot_parameters();
  const double loss0 = model.fit_step({&sample}, 0.0);
  const double loss1 = model.fit_step({&sample}, 0.0);
  CHECK(model.snapshot_parameters() == before);
  CHECK(loss0 == loss1);
}

TEST_CASE("toy_fit is reproducible bit for bit and decreases the loss") {
  const Camera cam = face_camera();
  const Vec3i dims = Vec3i::Constant(10);
  std::vector<TrainingSample> dataset;
  for (const FaceSample& face : make_face_bank(700, 6)) {
    const RenderedSample view = render_face_view(face, 0.0, 0.0, cam);
    dataset.push_back({view.image, voxelize(view.gt, dims, volume_box())});
  }

  LrSchedule lr;
  lr.initial = 0.5;
  ToyRegressor a(12, 12, dims, volume_box());
  ToyRegressor b(12, 12, dims, volume_box());
  const auto log_a = toy_fit(a, dataset, 8, 3, lr, 42);
  const auto log_b = toy_fit(b, dataset, 8, 3, lr, 42);

  REQUIRE(log_a.size() == 8);
  for (size_t e = 0; e < log_a.size(); ++e) {
    CHECK(log_a[e].train_loss == log_b[e].train_loss);
    CHECK(log_a[e].learning_rate == log_b[e].learning_rate);
  }
  CHECK(a.snapshot_parameters() == b.snapshot_parameters());

  // Non-increasing within 5% tolerance.
  for (size_t e = 1; e < log_a.size(); ++e)
    CHECK(log_a[e].train_loss <= log_a[e - 1].train_loss * 1.05);
  CHECK(log_a.back().train_loss < log_a.front().train_loss);

  // Different seed, different order, different path.
  ToyRegressor c(12, 12, dims, volume_box());
  const auto log_c = toy_fit(c, dataset, 8, 3, lr, 43);
  CHECK(log_c.back().train_loss != log_a.back().train_loss);
}

TEST_CASE("learning-rate schedule halves every period") {
  LrSchedule lr;
  lr.initial = 1e-2;
  lr.decay_factor = 0.5;
  lr.decay_period_epochs = 5;
  for (int epoch = 0; epoch < 20; ++epoch)
    CHECK(lr.at_epoch(epoch) ==
          doctest::Approx(1e-2 * std::pow(0.5, epoch / 5)).epsilon(1e-12));
}

TEST_CASE("toy reconstruct is deterministic and dims mismatches are rejected") {
  ToyRegressor model(8, 8, Vec3i::Constant(6), volume_box());
  const Image img(32, 32, Vec3f(0.7f, 0.2f, 0.2f));
  CHECK(model.reconstruct(img).values() == model.reconstruct(img).values());

  TrainingSample wrong;
  wrong.image = img;
  wrong.target = VoxelGrid(Vec3i::Constant(5), Vec3::Zero(), Vec3::Ones(),
                           std::vector<float>(125, 0.0f));
  CHECK_THROWS_AS(model.fit_step({&wrong}, 0.1), Error);
}

TEST_CASE("TOY1 model file round trip") {
  namespace fs = std::filesystem;
  ToyRegressor model(6, 6, Vec3i(4, 5, 6), volume_box());
  // Nudge the parameters so the file is not all zeros.
  const FaceSample face = make_face_bank(800, 1).front();
  const RenderedSample view = render_face_view(face, 0.0, 0.0, face_camera());
  TrainingSample sample;
  sample.image = view.image;
  sample.target = voxelize(view.gt, Vec3i(4, 5, 6), volume_box());
  model.fit_step({&sample}, 0.3);

  const fs::path path = fs::temp_directory_path() / "boot3d_model.toy";
  write_toy(path.string(), model);
  const ToyRegressor loaded = read_toy(path.string());
  CHECK(loaded.input_width() == 6);
  CHECK(loaded.grid_dims() == Vec3i(4, 5, 6));
  CHECK(loaded.snapshot_parameters() == model.snapshot_parameters());
  CHECK((loaded.grid_bounds().min - model.grid_bounds().min).norm() == 0.0);
  fs::remove(path);
}
