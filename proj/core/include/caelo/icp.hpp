#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "caelo/geometry.hpp"
#include "caelo/ingest.hpp"

namespace caelo {

struct IcpParams {
  int max_iterations = 50;
  double initial_threshold = 2.0;  // d0, meters
  double decay = 0.9;              // lambda: threshold at iteration k is d0 * lambda^k
  double epsilon = 1e-6;           // stop when translation + rotation change falls below

  void validate() const;
  double threshold(int iteration) const;
};

struct IcpResult {
  Pose pose;                        // maps B points into A coordinates
  int iterations = 0;
  std::size_t correspondences = 0;  // pairs of the final fit
  double initial_rms = 0.0;         // initial pose on the final correspondence set
  double final_rms = 0.0;           // refined pose on the same set
  bool converged = false;
  bool warning = false;             // stopped early: fewer than 3 pairs survived rejection
};

/// Point-to-point ICP. Each point of B is paired with its nearest point of
/// A; pairs farther apart than the decaying threshold are rejected.
IcpResult icp_refine(const PointCloud& a, const PointCloud& b, const Pose& initial,
                     const IcpParams& params);

}  // namespace caelo
