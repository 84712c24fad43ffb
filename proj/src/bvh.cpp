#include "boot3d/bvh.hpp"

#include <algorithm>
#include <numeric>

#include "boot3d/error.hpp"

namespace boot3d {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection, 5.1.5.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

namespace {

double distance_to_box_sq(const Vec3& p, const Aabb& box) {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double lo = box.min[k] - p[k];
    const double hi = p[k] - box.max[k];
    if (lo > 0.0) d2 += lo * lo;
    if (hi > 0.0) d2 += hi * hi;
  }
  return d2;
}

}  // namespace

BvhIndex::BvhIndex(const TriangleMesh& mesh, int leaf_size) : leaf_size_(leaf_size) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw_error(ErrorCode::invalid_input, "BvhIndex: empty mesh");
  validate_mesh(mesh);

  const size_t n = mesh.triangles.size();
  va_.resize(n);
  vb_.resize(n);
  vc_.resize(n);
  centroids_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const Vec3i& t = mesh.triangles[i];
    va_[i] = mesh.vertices[t[0]];
    vb_[i] = mesh.vertices[t[1]];
    vc_[i] = mesh.vertices[t[2]];
    centroids_[i] = (va_[i] + vb_[i] + vc_[i]) / 3.0;
  }

  std::vector<int> slots(n);
  std::iota(slots.begin(), slots.end(), 0);
  nodes_.reserve(2 * n);
  build(slots, 0, static_cast<int>(n));

  // Freeze triangle data in leaf order so leaves scan contiguously.
  std::vector<Vec3> va(n), vb(n), vc(n);
  for (size_t i = 0; i < n; ++i) {
    va[i] = va_[slots[i]];
    vb[i] = vb_[slots[i]];
    vc[i] = vc_[slots[i]];
  }
  va_ = std::move(va);
  vb_ = std::move(vb);
  vc_ = std::move(vc);
  triangles_ = std::move(slots);
  centroids_.clear();
  centroids_.shrink_to_fit();
}

int BvhIndex::build(std::vector<int>& slots, int begin, int end) {
  const int self = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Aabb box;
  for (int i = begin; i < end; ++i) {
    box.expand(va_[slots[i]]);
    box.expand(vb_[slots[i]]);
    box.expand(vc_[slots[i]]);
  }
  nodes_[self].box = box;

  if (end - begin <= leaf_size_) {
    nodes_[self].leaf = true;
    nodes_[self].left = begin;
    nodes_[self].right = end;
    return self;
  }

  int axis = 0;
  const Vec3 ext = box.extent();
  if (ext[1] > ext[axis]) axis = 1;
  if (ext[2] > ext[axis]) axis = 2;
  const int mid = begin + (end - begin) / 2;
  std::nth_element(slots.begin() + begin, slots.begin() + mid, slots.begin() + end,
                   [&](int a, int b) { return centroids_[a][axis] < centroids_[b][axis]; });

  const int left = build(slots, begin, mid);
  const int right = build(slots, mid, end);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void BvhIndex::search(int node, const Vec3& query, Hit& best) const {
  const Node& n = nodes_[node];
  if (n.leaf) {
    for (int i = n.left; i < n.right; ++i) {
      const Vec3 p = closest_point_on_triangle(query, va_[i], vb_[i], vc_[i]);
      const double d2 = (p - query).squaredNorm();
      if (d2 < best.distance) {
        best.distance = d2;
        best.point = p;
        best.triangle = triangles_[i];
      }
    }
    return;
  }
  const double dl = distance_to_box_sq(query, nodes_[n.left].box);
  const double dr = distance_to_box_sq(query, nodes_[n.right].box);
  const int first = dl <= dr ? n.left : n.right;
  const int second = dl <= dr ? n.right : n.left;
  if (std::min(dl, dr) < best.distance) search(first, query, best);
  if (std::max(dl, dr) < best.distance) search(second, query, best);
}

BvhIndex::Hit BvhIndex::closest_point(const Vec3& query) const {
  Hit best;
  best.distance = std::numeric_limits<double>::max();
  search(0, query, best);
  best.distance = std::sqrt(best.distance);
  return best;
}

}  // namespace boot3d
