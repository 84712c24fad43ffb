#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "boot3d/error.hpp"
#include "boot3d/experiments.hpp"
#include "boot3d/marching_cubes.hpp"
#include "boot3d/mesh_io.hpp"
#include "boot3d/voxel_grid.hpp"
#include "boot3d/voxelize.hpp"
#include "test_support.hpp"

using namespace boot3d;
using namespace boot3d::testing;

namespace {

Aabb unit_box() {
  Aabb box;
  box.min = Vec3::Zero();
  box.max = Vec3::Ones();
  return box;
}

// Smooth blobby field for property tests: sum of Gaussians, quantized to
// multiples of 1/1024 so complementing values is exact in float.
VoxelGrid make_blob_grid(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> upos(0.25, 0.75);
  std::uniform_real_distribution<double> uwid(0.08, 0.2);
  struct Blob {
    Vec3 c;
    double w;
  };
  std::vector<Blob> blobs;
  for (int b = 0; b < 4; ++b) blobs.push_back({{upos(rng), upos(rng), upos(rng)}, uwid(rng)});

  const Vec3i dims = Vec3i::Constant(n);
  const Vec3 spacing = Vec3::Constant(1.0 / n);
  std::vector<float> values(static_cast<size_t>(n) * n * n);
  size_t idx = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 p((i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n);
        double v = 0.0;
        for (const Blob& blob : blobs)
          v += std::exp(-(p - blob.c).squaredNorm() / (blob.w * blob.w));
        v = std::min(v, 1.0);
        values[idx++] = static_cast<float>(std::round(v * 1024.0) / 1024.0);
      }
  return VoxelGrid(dims, Vec3::Zero(), spacing, std::move(values));
}

// Canonicalized triangle soup (sorted vertex triples) for geometric
// comparison up to winding and ordering.
std::vector<std::array<double, 9>> triangle_soup(const TriangleMesh& mesh) {
  std::vector<std::array<double, 9>> soup;
  for (const Vec3i& t : mesh.triangles) {
    std::array<Vec3, 3> v = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    std::sort(v.begin(), v.end(), [](const Vec3& a, const Vec3& b) {
      return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
    soup.push_back({v[0][0], v[0][1], v[0][2], v[1][0], v[1][1], v[1][2], v[2][0], v[2][1],
                    v[2][2]});
  }
  std::sort(soup.begin(), soup.end());
  return soup;
}

}  // namespace

TEST_CASE("marching cubes on a smoothed sphere recovers the analytic area") {
  const double r = 0.3;
  const VoxelGrid grid = make_sphere_occupancy_grid(64, Vec3::Constant(0.5), r, unit_box());
  const TriangleMesh mesh = marching_cubes(grid, 0.5);
  REQUIRE(!mesh.vertices.empty());
  validate_mesh(mesh);

  const double area = mesh_area(mesh);
  const double expect = 4.0 * kPi * r * r;
  CHECK(std::abs(area - expect) / expect < 0.02);

  // Vertices should hug the sphere.
  double worst = 0.0;
  for (const Vec3& v : mesh.vertices)
    worst = std::max(worst, std::abs((v - Vec3::Constant(0.5)).norm() - r));
  CHECK(worst < 1.5 * grid.spacing()[0]);
}

TEST_CASE("marching cubes sphere mesh is watertight with outward normals") {
  const VoxelGrid grid = make_sphere_occupancy_grid(64, Vec3::Constant(0.5), 0.3, unit_box());
  const TriangleMesh mesh = marching_cubes(grid, 0.5);
  for (const auto& [edge, count] : edge_use_counts(mesh)) CHECK(count == 2);

  // Consistent winding: every directed edge appears exactly once.
  std::map<std::pair<int, int>, int> directed;
  for (const Vec3i& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) directed[{t[k], t[(k + 1) % 3]}] += 1;
  for (const auto& [edge, count] : directed) {
    CHECK(count == 1);
    CHECK(directed.count({edge.second, edge.first}) == 1);
  }

  // Normals toward lower occupancy = outward: signed volume matches the ball.
  double vol6 = 0.0;
  for (const Vec3i& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]] - Vec3::Constant(0.5);
    const Vec3 b = mesh.vertices[t[1]] - Vec3::Constant(0.5);
    const Vec3 c = mesh.vertices[t[2]] - Vec3::Constant(0.5);
    vol6 += a.cross(b).dot(c);
  }
  const double ball = 4.0 / 3.0 * kPi * 0.3 * 0.3 * 0.3;
  CHECK(vol6 / 6.0 == doctest::Approx(ball).epsilon(0.01));
}

TEST_CASE("marching cubes: all-zero grid gives an empty mesh") {
  VoxelGrid grid(Vec3i::Constant(8), Vec3::Zero(), Vec3::Ones(),
                 std::vector<float>(512, 0.0f));
  const TriangleMesh mesh = marching_cubes(grid, 0.5);
  CHECK(mesh.vertices.empty());
  CHECK(mesh.triangles.empty());
}

TEST_CASE("marching cubes: non-finite values are rejected") {
  std::vector<float> values(512, 0.0f);
  values[100] = std::numeric_limits<float>::quiet_NaN();
  VoxelGrid grid(Vec3i::Constant(8), Vec3::Zero(), Vec3::Ones(), std::move(values));
  CHECK_THROWS_AS(marching_cubes(grid, 0.5), Error);
}

TEST_CASE("marching cubes on a half-space yields one plane of vertices") {
  const int n = 8;
  std::vector<float> values(n * n * n, 0.0f);
  VoxelGrid proto(Vec3i::Constant(n), Vec3::Zero(), Vec3::Ones(), std::move(values));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) proto.at(i, j, k) = i < n / 2 ? 1.0f : 0.0f;

  const TriangleMesh mesh = marching_cubes(proto, 0.5);
  REQUIRE(!mesh.vertices.empty());
  // Brute-force oracle: the 0.5 crossing lies halfway between samples 3 and 4.
  const double expect_x = proto.sample_position(3, 0, 0)[0] + 0.5;
  for (const Vec3& v : mesh.vertices) CHECK(v[0] == doctest::Approx(expect_x).epsilon(1e-12));
}

TEST_CASE("marching cubes is invariant under value complementation") {
  for (uint64_t seed : {11ull, 12ull, 13ull}) {
    const VoxelGrid grid = make_blob_grid(24, seed);
    std::vector<float> flipped = grid.values();
    for (float& v : flipped) v = 1.0f - v;
    const VoxelGrid complement(grid.dims(), grid.origin(), grid.spacing(), std::move(flipped));

    const double iso = 0.4;
    const TriangleMesh a = marching_cubes(grid, iso);
    const TriangleMesh b = marching_cubes(complement, 1.0 - iso);
    REQUIRE(!a.triangles.empty());
    REQUIRE(a.triangles.size() == b.triangles.size());

    const auto soup_a = triangle_soup(a);
    const auto soup_b = triangle_soup(b);
    for (size_t i = 0; i < soup_a.size(); ++i)
      for (int k = 0; k < 9; ++k)
        CHECK(soup_a[i][k] == doctest::Approx(soup_b[i][k]).epsilon(1e-12));
  }
}

TEST_CASE("watertightness holds on interior blob surfaces") {
  const VoxelGrid grid = make_blob_grid(24, 5);
  const TriangleMesh mesh = marching_cubes(grid, 0.5);
  REQUIRE(!mesh.triangles.empty());
  for (const auto& [edge, count] : edge_use_counts(mesh)) CHECK(count == 2);
}

TEST_CASE("voxelize fills a cube to its analytic volume") {
  const TriangleMesh cube = make_box_mesh(Vec3::Constant(0.2), Vec3::Constant(0.8));
  const int n = 16;
  const VoxelGrid grid = voxelize(cube, Vec3i::Constant(n), unit_box());

  size_t inside = 0;
  for (float v : grid.values()) inside += v > 0.5f;
  const double cell_vol = grid.spacing().prod();
  const double volume = static_cast<double>(inside) * cell_vol;
  const double expect = 0.6 * 0.6 * 0.6;
  // One cell-shell tolerance: surface area x cell size.
  const double shell = 6.0 * 0.36 * grid.spacing()[0];
  CHECK(std::abs(volume - expect) <= shell);

  // Spot-check cell classification against the analytic box.
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int i = pick(rng), j = pick(rng), k = pick(rng);
    const Vec3 center = grid.sample_position(i, j, k);
    const bool analytic = (center.array() > 0.2 + 1e-3).all() &&
                          (center.array() < 0.8 - 1e-3).all();
    const bool boundary = !analytic && (center.array() > 0.2 - 1e-3).all() &&
                          (center.array() < 0.8 + 1e-3).all();
    if (!boundary) CHECK((grid.at(i, j, k) > 0.5f) == analytic);
  }
}

TEST_CASE("voxelize rejects open sheets and empty meshes") {
  TriangleMesh sheet;
  sheet.vertices = {{0.2, 0.2, 0.5}, {0.8, 0.2, 0.5}, {0.8, 0.8, 0.5}, {0.2, 0.8, 0.5}};
  sheet.triangles = {{0, 1, 2}, {0, 2, 3}};
  CHECK_THROWS_AS(voxelize(sheet, Vec3i::Constant(8), unit_box()), Error);
  CHECK_THROWS_AS(voxelize(TriangleMesh{}, Vec3i::Constant(8), unit_box()), Error);
}

TEST_CASE("voxelize / marching cubes round trip preserves sphere area") {
  const double r = 0.3;
  const TriangleMesh sphere = make_icosphere(r, 3, Vec3::Constant(0.5));
  const double area0 = mesh_area(sphere);

  const VoxelGrid grid = voxelize_occupancy(sphere, Vec3i::Constant(64), unit_box(), 3);
  const TriangleMesh back = marching_cubes(grid, 0.5);
  const double area1 = mesh_area(back);
  CHECK(std::abs(area1 - area0) / area0 < 0.05);

  // Enclosed volume within 5% too (voxel count against the analytic ball).
  const VoxelGrid solid = voxelize(back, Vec3i::Constant(64), unit_box());
  size_t inside = 0;
  for (float v : solid.values()) inside += v > 0.5f;
  const double volume = static_cast<double>(inside) * solid.spacing().prod();
  CHECK(std::abs(volume - 4.0 / 3.0 * kPi * r * r * r) / (4.0 / 3.0 * kPi * r * r * r) < 0.05);
}

TEST_CASE("mesh accessors: area, centroid, bounds, validation") {
  TriangleMesh tri;
  tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  tri.triangles = {{0, 1, 2}};
  CHECK(mesh_area(tri) == doctest::Approx(0.5));
  CHECK((mesh_centroid(tri) - Vec3(1.0 / 3, 1.0 / 3, 0)).norm() < 1e-15);
  CHECK((mesh_bounds(tri).max - Vec3(1, 1, 0)).norm() == 0.0);

  const TriangleMesh ico = make_icosphere(1.0, 4);
  CHECK(std::abs(mesh_area(ico) - 4.0 * kPi) / (4.0 * kPi) < 0.005);

  TriangleMesh lonely;
  lonely.vertices = {{0, 0, 0}};
  CHECK_THROWS_AS(mesh_area(lonely), Error);
  CHECK_THROWS_AS(mesh_centroid(lonely), Error);
  CHECK_THROWS_AS(mesh_bounds(lonely), Error);

  TriangleMesh bad;
  bad.vertices = {{0, 0, 0}, {1, 0, 0}};
  bad.triangles = {{0, 1, 1}};
  CHECK_THROWS_AS(validate_mesh(bad), Error);
}

TEST_CASE("marching cubes is deterministic") {
  const VoxelGrid grid = make_blob_grid(16, 77);
  const TriangleMesh a = marching_cubes(grid, 0.5);
  const TriangleMesh b = marching_cubes(grid, 0.5);
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (size_t i = 0; i < a.vertices.size(); ++i) CHECK(a.vertices[i] == b.vertices[i]);
  REQUIRE(a.triangles.size() == b.triangles.size());
  for (size_t i = 0; i < a.triangles.size(); ++i) CHECK(a.triangles[i] == b.triangles[i]);
}

TEST_CASE("VXG1 and OBJ round trips") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "boot3d_geom_io";
  fs::create_directories(dir);

  const VoxelGrid grid = make_blob_grid(12, 3);
  write_vxg((dir / "g.vxg").string(), grid);
  const VoxelGrid back = read_vxg((dir / "g.vxg").string());
  CHECK(back.dims() == grid.dims());
  CHECK(back.origin() == grid.origin());
  CHECK(back.spacing() == grid.spacing());
  CHECK(back.values() == grid.values());

  TriangleMesh mesh = make_icosphere(0.5, 1);
  mesh.vertex_colors.assign(mesh.vertices.size(), Vec3(0.25, 0.5, 0.75));
  mesh.landmarks["nose_tip"] = 3;
  save_mesh((dir / "m.obj").string(), mesh);
  const TriangleMesh loaded = load_mesh((dir / "m.obj").string());
  REQUIRE(loaded.vertices.size() == mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    CHECK((loaded.vertices[i] - mesh.vertices[i]).norm() == 0.0);
  REQUIRE(loaded.triangles.size() == mesh.triangles.size());
  CHECK(loaded.landmarks.at("nose_tip") == 3);
  CHECK(loaded.has_colors());
  CHECK((loaded.vertex_colors[0] - mesh.vertex_colors[0]).norm() == 0.0);

  fs::remove_all(dir);
}
