#include "boot3d/mesh.hpp"

#include "boot3d/error.hpp"

namespace boot3d {

const Vec3& TriangleMesh::landmark(const std::string& name) const {
  auto it = landmarks.find(name);
  if (it == landmarks.end())
    throw_error(ErrorCode::missing_landmark, "landmark not present: " + name);
  return vertices.at(static_cast<size_t>(it->second));
}

void validate_mesh(const TriangleMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) {
    if (!v.allFinite())
      throw_error(ErrorCode::invalid_input, "mesh vertex is non-finite");
  }
  for (const Vec3i& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= n)
        throw_error(ErrorCode::invalid_input, "triangle index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw_error(ErrorCode::invalid_input, "degenerate triangle (repeated index)");
  }
  if (!mesh.vertex_colors.empty() && mesh.vertex_colors.size() != mesh.vertices.size())
    throw_error(ErrorCode::invalid_input, "vertex color count mismatch");
  for (const auto& [name, idx] : mesh.landmarks) {
    if (idx < 0 || idx >= n)
      throw_error(ErrorCode::invalid_input, "landmark index out of range: " + name);
  }
}

static void require_nonempty(const TriangleMesh& mesh, const char* op) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw_error(ErrorCode::invalid_input,
                std::string(op) + ": mesh must have vertices and triangles");
}

Aabb mesh_bounds(const TriangleMesh& mesh) {
  require_nonempty(mesh, "mesh_bounds");
  Aabb box;
  for (const Vec3& v : mesh.vertices) box.expand(v);
  return box;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double mesh_area(const TriangleMesh& mesh) {
  require_nonempty(mesh, "mesh_area");
  double area = 0.0;
  for (const Vec3i& t : mesh.triangles)
    area += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  return area;
}

Vec3 mesh_centroid(const TriangleMesh& mesh) {
  require_nonempty(mesh, "mesh_centroid");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& v : mesh.vertices) sum += v;
  return sum / static_cast<double>(mesh.vertices.size());
}

}  // namespace boot3d
