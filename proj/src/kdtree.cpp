#include "boot3d/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "boot3d/error.hpp"

namespace boot3d {

KdTree::KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.empty())
    throw_error(ErrorCode::invalid_input, "KdTree: empty point set");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(0, static_cast<int>(points_.size()), 0);
}

int KdTree::build(int begin, int end, int depth) {
  if (begin >= end) return -1;
  const int axis = depth % 3;
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
  Node node;
  node.axis = axis;
  node.point = order_[mid];
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  nodes_[self].left = build(begin, mid, depth + 1);
  nodes_[self].right = build(mid + 1, end, depth + 1);
  return self;
}

void KdTree::search(int node, const Vec3& query, int& best, double& best_d2) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const double d2 = (points_[n.point] - query).squaredNorm();
  if (d2 < best_d2) {
    best_d2 = d2;
    best = n.point;
  }
  const double delta = query[n.axis] - points_[n.point][n.axis];
  const int near = delta < 0 ? n.left : n.right;
  const int far = delta < 0 ? n.right : n.left;
  search(near, query, best, best_d2);
  if (delta * delta < best_d2) search(far, query, best, best_d2);
}

std::pair<int, double> KdTree::nearest(const Vec3& query) const {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::max();
  search(root_, query, best, best_d2);
  return {best, best_d2};
}

}  // namespace boot3d
