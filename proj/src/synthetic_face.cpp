#include "boot3d/synthetic_face.hpp"

#include <cmath>
#include <random>

#include "boot3d/error.hpp"

namespace boot3d {

namespace {

// Base half extents of the canonical face before per-spec scaling.
constexpr double kBaseHalfWidth = 0.55;
constexpr double kBaseHalfHeight = 0.80;
constexpr double kBaseRelief = 0.30;      // front surface peak height
constexpr double kBackPlane = -0.22;      // flat back of the slab

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi))
    throw_error(ErrorCode::invalid_input,
                std::string("synthetic face parameter out of range: ") + name);
}

double sq(double x) { return x * x; }

}  // namespace

Vec3 synthetic_face_half_extent() {
  return Vec3(kBaseHalfWidth * 1.3, kBaseHalfHeight * 1.3,
              std::max(kBaseRelief * 1.3, -kBackPlane));
}

SyntheticFaceSpec random_face_spec(uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  SyntheticFaceSpec spec;
  spec.seed = seed;
  spec.width_scale = uniform(0.7, 1.3);
  spec.height_scale = uniform(0.7, 1.3);
  spec.depth_scale = uniform(0.7, 1.3);
  spec.nose_length = uniform(0.22, 0.42);
  spec.nose_width = uniform(0.10, 0.24);
  spec.eye_offset_x = uniform(0.32, 0.52);
  spec.eye_offset_y = uniform(0.18, 0.38);
  spec.brow_depth = uniform(0.04, 0.18);
  return spec;
}

TriangleMesh generate_synthetic_face(const SyntheticFaceSpec& spec) {
  check_range(spec.width_scale, 0.7, 1.3, "width_scale");
  check_range(spec.height_scale, 0.7, 1.3, "height_scale");
  check_range(spec.depth_scale, 0.7, 1.3, "depth_scale");
  check_range(spec.nose_length, 0.22, 0.42, "nose_length");
  check_range(spec.nose_width, 0.10, 0.24, "nose_width");
  check_range(spec.eye_offset_x, 0.32, 0.52, "eye_offset_x");
  check_range(spec.eye_offset_y, 0.18, 0.38, "eye_offset_y");
  check_range(spec.brow_depth, 0.04, 0.18, "brow_depth");
  if (spec.grid_u < 8 || spec.grid_v < 8 || spec.grid_u % 2 != 0)
    throw_error(ErrorCode::invalid_input,
                "synthetic face grid must be even in u and at least 8x8");

  const double hw = kBaseHalfWidth * spec.width_scale;
  const double hh = kBaseHalfHeight * spec.height_scale;
  const double relief = kBaseRelief * spec.depth_scale;

  const double eye_u = spec.eye_offset_x;        // in [-1,1] face coordinates
  const double eye_v = spec.eye_offset_y;
  const double nose_tip_v = eye_v - spec.nose_length * 2.0;

  // Front relief in face coordinates; even in u by construction (u enters
  // via u*u or |u| only), which keeps the mesh exactly mirror-symmetric.
  auto front_height = [&](double u, double v) {
    const double au = std::abs(u);
    const double r2 = sq(u / 1.06) + sq(v / 1.06);
    const double dome = std::max(0.0, 1.0 - r2);
    const double nose_line = std::clamp((v - nose_tip_v) / (eye_v - nose_tip_v + 1e-12), -0.4, 1.2);
    const double nose = 0.9 * std::exp(-sq(u / spec.nose_width)) *
                        std::exp(-sq((nose_line - 0.25) / 0.55)) *
                        (v < eye_v + 0.15 ? 1.0 : 0.0);
    const double eyes = 0.55 * (std::exp(-sq((au - eye_u) / 0.16) - sq((v - eye_v) / 0.14)));
    const double brow = spec.brow_depth * 6.0 *
                        std::exp(-sq((v - eye_v - 0.22) / 0.12)) * std::exp(-sq(au / 0.7));
    const double mouth = 0.18 * std::exp(-sq((v - nose_tip_v + 0.28) / 0.10)) *
                         std::exp(-sq(au / 0.30));
    const double shape = 0.55 * dome + 0.50 * nose + brow - 0.35 * eyes * dome - mouth * dome;
    return relief * std::max(0.02, shape);
  };

  const int nu = spec.grid_u, nv = spec.grid_v;
  TriangleMesh mesh;
  const int front_count = (nu + 1) * (nv + 1);
  mesh.vertices.reserve(2 * front_count);

  // Exact +/- symmetric u coordinates (integer numerator keeps negation exact).
  auto u_coord = [&](int i) { return static_cast<double>(2 * i - nu) / nu; };
  auto v_coord = [&](int j) { return static_cast<double>(2 * j - nv) / nv; };

  for (int j = 0; j <= nv; ++j) {
    for (int i = 0; i <= nu; ++i) {
      const double u = u_coord(i), v = v_coord(j);
      mesh.vertices.push_back(Vec3(u * hw, v * hh, front_height(u, v)));
    }
  }
  for (int j = 0; j <= nv; ++j) {
    for (int i = 0; i <= nu; ++i) {
      const double u = u_coord(i), v = v_coord(j);
      mesh.vertices.push_back(Vec3(u * hw, v * hh, kBackPlane));
    }
  }

  auto front_idx = [&](int i, int j) { return j * (nu + 1) + i; };
  auto back_idx = [&](int i, int j) { return front_count + j * (nu + 1) + i; };

  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const int a = front_idx(i, j), b = front_idx(i + 1, j);
      const int c = front_idx(i + 1, j + 1), d = front_idx(i, j + 1);
      mesh.triangles.push_back(Vec3i(a, b, c));  // front faces +z
      mesh.triangles.push_back(Vec3i(a, c, d));
      const int e = back_idx(i, j), f = back_idx(i + 1, j);
      const int g = back_idx(i + 1, j + 1), h = back_idx(i, j + 1);
      mesh.triangles.push_back(Vec3i(e, g, f));  // back faces -z
      mesh.triangles.push_back(Vec3i(e, h, g));
    }
  }
  // Side walls stitch front rim to back rim.
  for (int i = 0; i < nu; ++i) {
    mesh.triangles.push_back(Vec3i(front_idx(i, 0), back_idx(i, 0), back_idx(i + 1, 0)));
    mesh.triangles.push_back(Vec3i(front_idx(i, 0), back_idx(i + 1, 0), front_idx(i + 1, 0)));
    mesh.triangles.push_back(Vec3i(front_idx(i, nv), back_idx(i + 1, nv), back_idx(i, nv)));
    mesh.triangles.push_back(Vec3i(front_idx(i, nv), front_idx(i + 1, nv), back_idx(i + 1, nv)));
  }
  for (int j = 0; j < nv; ++j) {
    mesh.triangles.push_back(Vec3i(front_idx(0, j), back_idx(0, j + 1), back_idx(0, j)));
    mesh.triangles.push_back(Vec3i(front_idx(0, j), front_idx(0, j + 1), back_idx(0, j + 1)));
    mesh.triangles.push_back(Vec3i(front_idx(nu, j), back_idx(nu, j), back_idx(nu, j + 1)));
    mesh.triangles.push_back(Vec3i(front_idx(nu, j), back_idx(nu, j + 1), front_idx(nu, j + 1)));
  }

  // Procedural skin tone: per-seed base color, relief-shaded, darker in the
  // sockets and around the rim. Gives renders enough structure for a
  // reconstructor to read pose from shading as well as silhouette.
  std::mt19937_64 color_rng(spec.seed * 0x2545f4914f6cdd1dull + 1);
  auto cuniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(color_rng);
  };
  const Vec3 skin(cuniform(0.55, 0.9), cuniform(0.42, 0.7), cuniform(0.32, 0.55));
  mesh.vertex_colors.resize(mesh.vertices.size());
  const double peak = relief;
  for (size_t vi = 0; vi < mesh.vertices.size(); ++vi) {
    const Vec3& p = mesh.vertices[vi];
    if (vi >= static_cast<size_t>(front_count)) {
      mesh.vertex_colors[vi] = 0.25 * skin;  // back and rim stay dark
      continue;
    }
    const double u = p[0] / hw, v = p[1] / hh;
    const double shade = 0.55 + 0.45 * std::clamp(p[2] / peak, 0.0, 1.0);
    const double socket =
        std::exp(-sq((std::abs(u) - eye_u) / 0.17) - sq((v - eye_v) / 0.15));
    const double lips = std::exp(-sq((v - nose_tip_v + 0.28) / 0.09)) *
                        std::exp(-sq(u / 0.32));
    Vec3 c = skin * shade * (1.0 - 0.45 * socket);
    c += Vec3(0.25, -0.05, -0.02) * lips;
    mesh.vertex_colors[vi] = c.cwiseMax(0.0).cwiseMin(1.0);
  }

  // Landmarks: snap the nearest front vertices exactly onto the eye corners
  // (mirror pair moved together so symmetry survives) and tag the nose tip.
  const double eye_x = eye_u * hw;
  const double eye_y = eye_v * hh;
  int iu_eye = static_cast<int>(std::lround((eye_u + 1.0) * nu / 2.0));
  iu_eye = std::clamp(iu_eye, nu / 2 + 1, nu - 1);
  int jv_eye = static_cast<int>(std::lround((eye_v + 1.0) * nv / 2.0));
  jv_eye = std::clamp(jv_eye, 1, nv - 1);
  const int right_eye = front_idx(iu_eye, jv_eye);
  const int left_eye = front_idx(nu - iu_eye, jv_eye);
  const double eye_z = front_height(eye_u, eye_v);
  mesh.vertices[right_eye] = Vec3(eye_x, eye_y, eye_z);
  mesh.vertices[left_eye] = Vec3(-eye_x, eye_y, eye_z);

  int jv_nose = static_cast<int>(std::lround((nose_tip_v + 1.0) * nv / 2.0));
  jv_nose = std::clamp(jv_nose, 1, nv - 1);
  const int nose = front_idx(nu / 2, jv_nose);

  mesh.landmarks["eye_outer_left"] = left_eye;
  mesh.landmarks["eye_outer_right"] = right_eye;
  mesh.landmarks["nose_tip"] = nose;
  return mesh;
}

}  // namespace boot3d
