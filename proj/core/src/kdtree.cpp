#include "caelo/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace caelo {

KdTree::KdTree(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
  std::vector<std::size_t> ids(points_.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  nodes_.reserve(points_.size());
  root_ = build(ids, 0);
}

int KdTree::build(std::span<std::size_t> ids, int depth) {
  if (ids.empty()) return -1;
  const int axis = depth % 3;
  const std::size_t mid = ids.size() / 2;
  std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(mid), ids.end(),
                   [&](std::size_t a, std::size_t b) {
                     const double pa = points_[a][axis], pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back({ids[mid], axis, -1, -1});
  const int left = build(ids.subspan(0, mid), depth + 1);
  const int right = build(ids.subspan(mid + 1), depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree::search(int node, const Eigen::Vector3d& q, Hit& best) const {
  if (node < 0) return;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  const Eigen::Vector3d& p = points_[n.point];
  const double d2 = (p - q).squaredNorm();
  if (d2 < best.squared_distance || (d2 == best.squared_distance && n.point < best.index)) {
    best = {n.point, d2};
  }
  const double diff = q[n.axis] - p[n.axis];
  search(diff < 0.0 ? n.left : n.right, q, best);
  // <= keeps exact ties on the far side reachable for the index tie-break.
  if (diff * diff <= best.squared_distance) search(diff < 0.0 ? n.right : n.left, q, best);
}

KdTree::Hit KdTree::nearest(const Eigen::Vector3d& query) const {
  if (root_ < 0) throw std::logic_error("nearest-neighbor query on an empty kd-tree");
  Hit best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  search(root_, query, best);
  return best;
}

}  // namespace caelo
