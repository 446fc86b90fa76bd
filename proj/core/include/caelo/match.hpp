#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "caelo/describe.hpp"
#include "caelo/geometry.hpp"
#include "caelo/metrics.hpp"

namespace caelo {

struct MatchPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// Mutual nearest neighbors in feature space, ordered by index in `a`.
/// Ties go to the lower index.
std::vector<MatchPair> nn_match(std::span<const Feature> a, std::span<const Feature> b,
                                int threads = 1);

/// Least-squares rigid fit a_i ~ R b_i + t with det R = +1. Throws
/// std::invalid_argument for fewer than 3 pairs or mismatched sizes and
/// DegenerateError when the points are collinear.
Pose kabsch(std::span<const Eigen::Vector3d> a, std::span<const Eigen::Vector3d> b);

struct RansacParams {
  double inlier_threshold = 1.0;  // meters
  int min_iterations = 100;
  int max_iterations = 10000;
  double confidence = 0.999;
  std::uint64_t seed = 0;

  void validate() const;
};

struct MatchResult {
  Pose pose;  // maps frame-b points into frame-a coordinates
  std::vector<MatchPair> inliers;
  int iterations = 0;
  double inlier_ratio = 0.0;  // inliers / candidate pairs
};

/// Iterations needed to draw one all-inlier triple with `confidence` when a
/// fraction `w` of pairs are inliers, clamped to [min, max].
int adaptive_iterations(double w, const RansacParams& params);

/// RANSAC over 3-pair samples, then a refit on the best consensus set.
/// Inliers are those within the threshold under the reported pose. Throws
/// std::invalid_argument for fewer than 3 pairs and NoModelError when every
/// sample is degenerate.
MatchResult ransac_pose(std::span<const Eigen::Vector3d> points_a,
                        std::span<const Eigen::Vector3d> points_b, std::span<const MatchPair> pairs,
                        const RansacParams& params);

/// Text dump: pose (12 reals), iterations, inlier ratio, then "a b" per inlier.
void write_match_result(const MatchResult& result, std::ostream& out);

}  // namespace caelo
