// Shared fixtures and independent oracles for the test suites. Everything
// here is deliberately simple and slow: brute force over all triangles,
// closed-form shapes, hand-rolled generators with fixed seeds.
#pragma once

#include <cmath>
#include <map>
#include <random>

#include "boot3d/bvh.hpp"
#include "boot3d/mesh.hpp"
#include "boot3d/types.hpp"

namespace boot3d::testing {

inline TriangleMesh make_box_mesh(const Vec3& lo, const Vec3& hi) {
  TriangleMesh mesh;
  for (int c = 0; c < 8; ++c)
    mesh.vertices.push_back(Vec3(c & 1 ? hi[0] : lo[0], c & 2 ? hi[1] : lo[1],
                                 c & 4 ? hi[2] : lo[2]));
  const int quads[6][4] = {
      {0, 2, 3, 1},  // z = lo (normal -z)
      {4, 5, 7, 6},  // z = hi
      {0, 1, 5, 4},  // y = lo
      {2, 6, 7, 3},  // y = hi
      {0, 4, 6, 2},  // x = lo
      {1, 3, 7, 5},  // x = hi
  };
  for (const auto& q : quads) {
    mesh.triangles.push_back(Vec3i(q[0], q[1], q[2]));
    mesh.triangles.push_back(Vec3i(q[0], q[2], q[3]));
  }
  return mesh;
}

/// Icosphere by midpoint subdivision; vertices lie exactly on the sphere.
inline TriangleMesh make_icosphere(double radius, int subdivisions,
                                   const Vec3& center = Vec3::Zero()) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : verts) v.normalize();
  std::vector<Vec3i> tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(verts.size());
      verts.push_back((verts[a] + verts[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Vec3i> next;
    next.reserve(tris.size() * 4);
    for (const Vec3i& tr : tris) {
      const int ab = mid(tr[0], tr[1]), bc = mid(tr[1], tr[2]), ca = mid(tr[2], tr[0]);
      next.push_back({tr[0], ab, ca});
      next.push_back({tr[1], bc, ab});
      next.push_back({tr[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  TriangleMesh mesh;
  mesh.vertices.reserve(verts.size());
  for (const Vec3& v : verts) mesh.vertices.push_back(center + radius * v);
  mesh.triangles = std::move(tris);
  return mesh;
}

/// O(queries x triangles) closest-point oracle.
inline Vec3 brute_force_closest(const Vec3& q, const TriangleMesh& mesh, double* dist) {
  double best = std::numeric_limits<double>::max();
  Vec3 best_p = Vec3::Zero();
  for (const Vec3i& t : mesh.triangles) {
    const Vec3 p = closest_point_on_triangle(q, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                             mesh.vertices[t[2]]);
    const double d = (p - q).norm();
    if (d < best) {
      best = d;
      best_p = p;
    }
  }
  if (dist) *dist = best;
  return best_p;
}

inline double brute_force_nme(const TriangleMesh& pred, const TriangleMesh& gt, double d) {
  double sum = 0.0;
  for (const Vec3& v : pred.vertices) {
    double dist = 0.0;
    brute_force_closest(v, gt, &dist);
    sum += dist;
  }
  return sum / (static_cast<double>(pred.vertices.size()) * d);
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

/// Rotation by a bounded random angle about a random axis.
inline Mat3 random_rotation_bounded(std::mt19937_64& rng, double max_angle_deg) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uang(-max_angle_deg, max_angle_deg);
  Vec3 axis(normal(rng), normal(rng), normal(rng));
  axis.normalize();
  return Eigen::AngleAxisd(deg_to_rad(uang(rng)), axis).toRotationMatrix();
}

inline double rotation_angle_deg(const Mat3& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  return rad_to_deg(std::acos(c));
}

/// Map edge -> incident triangle count; watertight means every count == 2.
inline std::map<std::pair<int, int>, int> edge_use_counts(const TriangleMesh& mesh) {
  std::map<std::pair<int, int>, int> counts;
  for (const Vec3i& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const auto e = std::minmax(t[k], t[(k + 1) % 3]);
      counts[e] += 1;
    }
  }
  return counts;
}

}  // namespace boot3d::testing
