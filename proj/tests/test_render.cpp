#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "boot3d/error.hpp"
#include "boot3d/render.hpp"
#include "boot3d/synthetic_face.hpp"
#include "test_support.hpp"

using namespace boot3d;
using namespace boot3d::testing;

namespace {

Camera test_camera(int size = 64, double half = 1.0) {
  Camera cam;
  cam.half_w = half;
  cam.half_h = half;
  cam.image_width = size;
  cam.image_height = size;
  cam.near = -100.0;
  cam.far = 100.0;
  return cam;
}

Image gradient_image(int w, int h) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const float g = static_cast<float>(x) / (w - 1);
      img.set(x, y, Vec3f(g, g, g));
    }
  return img;
}

TriangleMesh fullscreen_triangle(const Vec3& color, double z = 0.0) {
  TriangleMesh tri;
  tri.vertices = {{-10, -10, z}, {10, -10, z}, {0, 10, z}};
  tri.triangles = {{0, 1, 2}};
  tri.vertex_colors.assign(3, color);
  return tri;
}

size_t count_covered(const RenderedView& view) {
  size_t covered = 0;
  for (int y = 0; y < view.image.height; ++y)
    for (int x = 0; x < view.image.width; ++x) covered += view.covered(x, y);
  return covered;
}

}  // namespace

TEST_CASE("project_colors: constant image paints every vertex that gray") {
  const Image gray(8, 8, Vec3f(0.4f, 0.4f, 0.4f));
  const TriangleMesh mesh = make_icosphere(0.5, 2);
  const TriangleMesh colored = project_colors(mesh, gray, test_camera());
  REQUIRE(colored.has_colors());
  for (const Vec3& c : colored.vertex_colors)
    CHECK((c - Vec3(0.4, 0.4, 0.4)).norm() < 1e-6);
}

TEST_CASE("project_colors: gradient endpoints and center pixel") {
  const Camera cam = test_camera(64, 1.0);
  const Image img = gradient_image(64, 64);

  TriangleMesh mesh;
  mesh.vertices = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  const TriangleMesh colored = project_colors(mesh, img, cam);

  CHECK(colored.vertex_colors[0][0] == doctest::Approx(0.0).epsilon(1.0 / 255));
  CHECK(colored.vertex_colors[1][0] == doctest::Approx(1.0).epsilon(2.0 / 255));
  // Image center: bilinear blend of the two middle columns.
  const double expect = 0.5 * (31.0 / 63.0 + 32.0 / 63.0);
  CHECK(colored.vertex_colors[2][0] == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("project_colors rejects empty images") {
  CHECK_THROWS_AS(project_colors(make_icosphere(0.5, 1), Image{}, test_camera()), Error);
}

TEST_CASE("rasterize: fullscreen triangle paints every pixel") {
  const RenderedView view = rasterize({fullscreen_triangle(Vec3(1, 0, 0))}, test_camera(32));
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      CHECK(view.covered(x, y));
      CHECK((view.image.at(x, y) - Vec3f(1, 0, 0)).norm() < 1e-6);
    }
}

TEST_CASE("rasterize: nearer triangle wins the z-buffer everywhere it overlaps") {
  // Camera looks along -z, so bigger z is closer.
  const TriangleMesh red = fullscreen_triangle(Vec3(1, 0, 0), 0.5);
  const TriangleMesh blue = fullscreen_triangle(Vec3(0, 0, 1), -0.5);
  const RenderedView view = rasterize({blue, red}, test_camera(32));
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) CHECK((view.image.at(x, y) - Vec3f(1, 0, 0)).norm() < 1e-6);
}

TEST_CASE("rasterize: sphere silhouette area matches the analytic disc") {
  const double r = 0.6;
  TriangleMesh sphere = make_icosphere(r, 4);
  sphere.vertex_colors.assign(sphere.vertices.size(), Vec3(1, 1, 1));
  const Camera cam = test_camera(256, 1.0);
  const RenderedView view = rasterize({sphere}, cam);
  const double covered = static_cast<double>(count_covered(view));
  const double expect = kPi * r * r / (2.0 * 2.0) * 256.0 * 256.0;
  CHECK(std::abs(covered - expect) / expect < 0.02);
}

TEST_CASE("rasterize rejects colorless meshes and degenerate cameras") {
  TriangleMesh bare = make_icosphere(0.5, 1);
  CHECK_THROWS_AS(rasterize({bare}, test_camera()), Error);
  Camera flat = test_camera();
  flat.half_w = 0.0;
  bare.vertex_colors.assign(bare.vertices.size(), Vec3(1, 1, 1));
  CHECK_THROWS_AS(rasterize({bare}, flat), Error);
}

TEST_CASE("rasterize is deterministic") {
  TriangleMesh sphere = make_icosphere(0.7, 3);
  sphere.vertex_colors.assign(sphere.vertices.size(), Vec3(0.2, 0.9, 0.4));
  const RenderedView a = rasterize({sphere}, test_camera(96));
  const RenderedView b = rasterize({sphere}, test_camera(96));
  CHECK(a.image.pixels == b.image.pixels);
  CHECK(a.depth == b.depth);
}

TEST_CASE("rasterize: depth equals the brute-force per-pixel minimum") {
  TriangleMesh mesh = make_icosphere(0.8, 2);
  mesh.vertex_colors.assign(mesh.vertices.size(), Vec3(1, 1, 1));
  const Camera cam = test_camera(32, 1.0);
  const RenderedView view = rasterize({mesh}, cam);

  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3i& t : mesh.triangles) {
        const Vec3 a = cam.project(mesh.vertices[t[0]]);
        const Vec3 b = cam.project(mesh.vertices[t[1]]);
        const Vec3 c = cam.project(mesh.vertices[t[2]]);
        const double area2 =
            (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        if (area2 == 0.0) continue;
        const double w0 = ((b[0] - px) * (c[1] - py) - (c[0] - px) * (b[1] - py)) / area2;
        const double w1 = ((c[0] - px) * (a[1] - py) - (a[0] - px) * (c[1] - py)) / area2;
        const double w2 = ((a[0] - px) * (b[1] - py) - (b[0] - px) * (a[1] - py)) / area2;
        // Interior-only oracle; boundary pixels are fill-rule territory.
        if (w0 <= 1e-9 || w1 <= 1e-9 || w2 <= 1e-9) continue;
        best = std::min(best, w0 * a[2] + w1 * b[2] + w2 * c[2]);
      }
      if (std::isfinite(best)) {
        REQUIRE(view.covered(x, y));
        CHECK(view.depth[y * 32 + x] == doctest::Approx(best).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("silhouette coverage is stable under 2x supersampling") {
  TriangleMesh face = generate_synthetic_face(random_face_spec(3));
  face.vertex_colors.assign(face.vertices.size(), Vec3(1, 1, 1));
  const RenderedView lo = rasterize({face}, test_camera(256, 1.2));
  const RenderedView hi = rasterize({face}, test_camera(512, 1.2));
  const double frac_lo = static_cast<double>(count_covered(lo)) / (256.0 * 256.0);
  const double frac_hi = static_cast<double>(count_covered(hi)) / (512.0 * 512.0);
  CHECK(std::abs(frac_lo - frac_hi) / frac_hi < 0.01);
}

TEST_CASE("make_backplane sits behind the mesh and covers the viewport") {
  const TriangleMesh face = generate_synthetic_face(random_face_spec(8));
  const FaceFrame frame = estimate_face_frame(face);
  const Camera cam = test_camera(64, 1.2);
  const Image source(32, 32, Vec3f(0.5f, 0.5f, 0.5f));

  const TriangleMesh quad = make_backplane(frame, mesh_bounds(face), source, cam);
  REQUIRE(!quad.triangles.empty());
  double mesh_rear = std::numeric_limits<double>::max();
  for (const Vec3& v : face.vertices) mesh_rear = std::min(mesh_rear, v.dot(frame.gaze));
  for (const Vec3& v : quad.vertices) CHECK(v.dot(frame.gaze) <= mesh_rear - 1e-6);

  // Frontal frame: the quad alone must cover every pixel.
  const RenderedView view = rasterize({quad}, cam);
  CHECK(count_covered(view) == 64 * 64);

  // With subdivisions = 1, exactly the two-triangle quad.
  const TriangleMesh plain = make_backplane(frame, mesh_bounds(face), source, cam, 1);
  CHECK(plain.vertices.size() == 4);
  CHECK(plain.triangles.size() == 2);
}

TEST_CASE("render_sweep: background pixels identical while the face turns") {
  TriangleMesh face = generate_synthetic_face(random_face_spec(12));
  const FaceFrame frame = estimate_face_frame(face);
  const Camera cam = test_camera(96, 1.3);
  const Image source = gradient_image(96, 96);

  const ViewSchedule schedule =
      build_schedule(frame, 10.0, 0.0, 90.0, std::vector<double>{0.0 + 10.0, 50.0});
  const std::vector<RenderedView> views = render_sweep(face, frame, source, schedule, cam);
  REQUIRE(views.size() == 2);

  // Pixels covered by neither face silhouette must agree exactly.
  TriangleMesh colored = project_colors(face, source, cam);
  auto silhouette = [&](const RigidTransform& t) {
    return rasterize({apply_transform(colored, t)}, cam);
  };
  const RenderedView s0 = silhouette(views[0].transform);
  const RenderedView s1 = silhouette(views[1].transform);
  size_t background = 0;
  for (int y = 0; y < 96; ++y)
    for (int x = 0; x < 96; ++x) {
      if (s0.covered(x, y) || s1.covered(x, y)) continue;
      ++background;
      CHECK(views[0].image.at(x, y) == views[1].image.at(x, y));
    }
  CHECK(background > 0);
}

TEST_CASE("render_sweep: empty schedule, identity entry, mirror symmetry") {
  TriangleMesh face = generate_synthetic_face(random_face_spec(17));
  face.vertex_colors.clear();  // exercise the projection path
  const FaceFrame frame = estimate_face_frame(face);
  Camera cam = test_camera(128, 1.3);
  cam.center_x = frame.centroid[0];
  cam.center_y = frame.centroid[1];
  const Image source(128, 128, Vec3f(0.55f, 0.45f, 0.4f));

  ViewSchedule empty;
  CHECK(render_sweep(face, frame, source, empty, cam).empty());

  // Identity entry renders exactly the untransformed scene.
  ViewSchedule ident;
  ident.entries.push_back({0.0, 0.0, RigidTransform::identity()});
  const std::vector<RenderedView> one = render_sweep(face, frame, source, ident, cam);
  const TriangleMesh colored = project_colors(face, source, cam);
  const TriangleMesh backplane = make_backplane(frame, mesh_bounds(colored), source, cam);
  const RenderedView direct = rasterize({colored, backplane}, cam);
  CHECK(one[0].image.pixels == direct.image.pixels);

  // +/-20 degree silhouettes of a symmetric face are mirror images.
  const ViewSchedule pair =
      build_schedule(frame, 10.0, 0.0, 90.0, std::vector<double>{-20.0, 20.0});
  TriangleMesh white = face;
  white.vertex_colors.assign(white.vertices.size(), Vec3(1, 1, 1));
  const RenderedView neg = rasterize({apply_transform(white, pair.entries[0].transform)}, cam);
  const RenderedView pos = rasterize({apply_transform(white, pair.entries[1].transform)}, cam);
  size_t disagree = 0;
  for (int y = 0; y < 128; ++y)
    for (int x = 0; x < 128; ++x)
      disagree += pos.covered(x, y) != neg.covered(127 - x, y);
  CHECK(static_cast<double>(disagree) / (128.0 * 128.0) < 0.01);
}

TEST_CASE("render_sweep parallel output is independent of thread count") {
  TriangleMesh face = generate_synthetic_face(random_face_spec(23));
  const FaceFrame frame = estimate_face_frame(face);
  const Camera cam = test_camera(64, 1.3);
  const Image source(64, 64, Vec3f(0.6f, 0.5f, 0.45f));
  const ViewSchedule schedule = build_schedule(frame, 30.0, 0.0, 90.0);

  const auto serial = render_sweep(face, frame, source, schedule, cam, 1);
  const auto parallel = render_sweep(face, frame, source, schedule, cam, 8);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].image.pixels == parallel[i].image.pixels);
    CHECK(serial[i].depth == parallel[i].depth);
  }
}
