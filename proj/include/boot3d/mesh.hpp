#pragma once

#include <map>
#include <string>
#include <vector>

#include "boot3d/types.hpp"

namespace boot3d {

/// Axis-aligned bounding box.
struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 max = Vec3::Constant(std::numeric_limits<double>::lowest());

  bool empty() const { return (min.array() > max.array()).any(); }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }
  double diagonal() const { return empty() ? 0.0 : extent().norm(); }

  void expand(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void expand(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
};

/// Indexed triangle surface with optional per-vertex color and named
/// landmarks. Reserved landmark names: "eye_outer_left", "eye_outer_right",
/// "nose_tip".
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3i> triangles;
  std::vector<Vec3> vertex_colors;           // empty or one RGB in [0,1] per vertex
  std::map<std::string, int> landmarks;      // name -> vertex index

  bool has_colors() const {
    return !vertex_colors.empty() && vertex_colors.size() == vertices.size();
  }
  bool has_landmark(const std::string& name) const {
    return landmarks.count(name) != 0;
  }
  const Vec3& landmark(const std::string& name) const;
};

/// Throws Error(invalid_input) when indices are out of range, a triangle
/// repeats an index, a coordinate is non-finite, colors/landmarks are
/// inconsistent. Vertices-only meshes (no triangles) are accepted.
void validate_mesh(const TriangleMesh& mesh);

Aabb mesh_bounds(const TriangleMesh& mesh);
double mesh_area(const TriangleMesh& mesh);
Vec3 mesh_centroid(const TriangleMesh& mesh);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace boot3d
