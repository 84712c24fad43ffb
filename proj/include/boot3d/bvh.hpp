#pragma once

#include <vector>

#include "boot3d/mesh.hpp"

namespace boot3d {

/// Exact closest point on the triangle abc to p (vertex, edge and interior
/// cases).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Median-split bounding-volume hierarchy over a mesh's triangles
/// (leaf size <= 8). Immutable after construction; queries are exact and
/// safe to run concurrently.
class BvhIndex {
 public:
  explicit BvhIndex(const TriangleMesh& mesh, int leaf_size = 8);

  struct Hit {
    Vec3 point = Vec3::Zero();
    double distance = 0.0;
    int triangle = -1;
  };

  Hit closest_point(const Vec3& query) const;

  size_t triangle_count() const { return triangles_.size(); }
  const Aabb& bounds() const { return nodes_[0].box; }

 private:
  struct Node {
    Aabb box;
    int left = -1;    // internal: child index; leaf: first triangle slot
    int right = -1;   // internal: child index; leaf: one-past-last slot
    bool leaf = false;
  };

  int build(std::vector<int>& slots, int begin, int end);
  void search(int node, const Vec3& query, Hit& best) const;

  std::vector<Vec3> va_, vb_, vc_;   // triangle corners, leaf order
  std::vector<int> triangles_;       // original triangle index per slot
  std::vector<Node> nodes_;
  int leaf_size_;
  std::vector<Vec3> centroids_;      // scratch during build
};

}  // namespace boot3d
