#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "caelo/geometry.hpp"

namespace caelo {

/// One LiDAR frame in the sensor coordinate system. `intensity` is either
/// empty or parallel to `points`.
struct PointCloud {
  std::vector<Eigen::Vector3f> points;
  std::vector<float> intensity;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  bool has_intensity() const noexcept { return !intensity.empty(); }
};

/// Pose of every frame expressed in the frame-0 coordinate system.
struct Trajectory {
  std::vector<Pose> poses;

  std::size_t size() const noexcept { return poses.size(); }
};

struct LoadStats {
  std::size_t decoded = 0;
  std::size_t dropped_nonfinite = 0;
};

/// Decodes packed little-endian float32 quadruples (x, y, z, intensity).
/// Non-finite points are dropped and counted in `stats`.
PointCloud read_kitti_bin(const std::filesystem::path& path, LoadStats* stats = nullptr);
void write_kitti_bin(const PointCloud& cloud, const std::filesystem::path& path);

/// KITTI pose text: one row-major 3x4 [R|t] per non-empty line.
Trajectory parse_poses(const std::string& text);
Trajectory read_poses(const std::filesystem::path& path);
std::string format_poses(const Trajectory& trajectory);
void write_poses(const Trajectory& trajectory, const std::filesystem::path& path);

/// Chains relative poses T_1..T_n into a trajectory starting at identity.
Trajectory trajectory_from_relatives(const std::vector<Pose>& relatives);

/// Adds `angle` (radians) to every point's elevation, keeping range and
/// azimuth. Approximates a constant vertical mis-calibration of the sensor.
void apply_vertical_correction(PointCloud& cloud, double angle);

/// Shortest text that parses back to the same double.
std::string format_real(double value);

}  // namespace caelo
