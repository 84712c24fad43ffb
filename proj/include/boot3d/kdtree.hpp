#pragma once

#include <vector>

#include "boot3d/types.hpp"

namespace boot3d {

/// Static kd-tree over a point set for exact nearest-neighbor queries.
class KdTree {
 public:
  explicit KdTree(std::vector<Vec3> points);

  /// Returns (index, squared distance) of the nearest point.
  std::pair<int, double> nearest(const Vec3& query) const;

  size_t size() const { return points_.size(); }

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int axis = 0;
    int point = -1;
  };

  int build(int begin, int end, int depth);
  void search(int node, const Vec3& query, int& best, double& best_d2) const;

  std::vector<Vec3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace boot3d
