#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace caelo {

/// Static 3D kd-tree for exact nearest-neighbor queries.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::vector<Eigen::Vector3d> points);

  std::size_t size() const noexcept { return points_.size(); }
  const Eigen::Vector3d& point(std::size_t i) const { return points_[i]; }

  struct Hit {
    std::size_t index = 0;
    double squared_distance = 0.0;
  };
  /// Nearest stored point; ties go to the lower index. Requires size() > 0.
  Hit nearest(const Eigen::Vector3d& query) const;

 private:
  struct Node {
    std::size_t point = 0;  // index into points_
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::span<std::size_t> ids, int depth);
  void search(int node, const Eigen::Vector3d& q, Hit& best) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace caelo
