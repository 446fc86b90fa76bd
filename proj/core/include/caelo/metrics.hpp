#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "caelo/geometry.hpp"
#include "caelo/ingest.hpp"

namespace caelo {

struct PoseError {
  double rte = 0.0;  // meters
  double rre = 0.0;  // degrees
};

/// rte = |t_est - t_gt|, rre = rotation angle of R_gt^T R_est in degrees.
PoseError rte_rre(const Pose& estimated, const Pose& truth);

inline constexpr double kSuccessRte = 0.5;
inline constexpr double kSuccessRre = 1.0;

inline bool is_success(const PoseError& e) { return e.rte < kSuccessRte && e.rre < kSuccessRre; }

/// Pose of frame i relative to frame i-1.
Pose relative_pose(const Trajectory& trajectory, std::size_t i);

struct TrajectoryEvaluation {
  std::vector<PoseError> per_frame;  // frame pairs (i-1, i), i >= 1
  double success_rate = 0.0;
  double rte_mean = 0.0, rte_std = 0.0;
  double rre_mean = 0.0, rre_std = 0.0;
  PoseError endpoint;  // absolute error of the last frame's pose
};

/// Throws std::invalid_argument on length mismatch.
TrajectoryEvaluation evaluate(const Trajectory& estimate, const Trajectory& truth);

/// "frame,rte,rre,success" rows.
std::string evaluation_csv(const TrajectoryEvaluation& eval);
std::string evaluation_summary(const TrajectoryEvaluation& eval);
/// "frame,est_x,est_y,truth_x,truth_y" rows.
std::string xy_csv(const Trajectory& estimate, const Trajectory& truth);
/// Both xy paths as polylines in one SVG document.
std::string xy_svg(const Trajectory& estimate, const Trajectory& truth);

}  // namespace caelo
