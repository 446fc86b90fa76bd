#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "caelo/geometry.hpp"
#include "caelo/ingest.hpp"

namespace caelo {

/// Primitive shapes in their own local frame, placed by `pose`.
///   plane:    local z = 0; `size` = (sx, sy, -) full extents, zero = unbounded
///   box:      centered at the origin; `size` = full extents
///   cylinder: axis along local +z from z = 0 to z = height;
///             `size` = (radius, height, -)
struct ScenePrimitive {
  enum class Kind { plane, box, cylinder };

  Kind kind = Kind::plane;
  Pose pose;
  Eigen::Vector3d size = Eigen::Vector3d::Zero();
};

/// A static scene plus a multi-beam spinning sensor model.
///
/// Beam k of `beam_count` points at elevation
///   fov_low + (k + 1/2) * (fov_high - fov_low) / beam_count
/// and azimuth column j at pi - (j + 1/2) * azimuth_step, so a ring with the
/// same angular resolution places every ray at the center of a pixel.
struct SynthSceneSpec {
  std::vector<ScenePrimitive> primitives;
  int beam_count = 64;
  double azimuth_step = 0.0;  // radians
  double fov_low = 0.0;       // radians
  double fov_high = 0.0;      // radians
  double noise_sigma = 0.0;   // meters, Gaussian along the ray
  double min_range = 0.5;
  double max_range = 120.0;
  std::uint64_t seed = 0;

  int azimuth_count() const;
  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// Parses the `synthscene v1` text format (see data/scenes/ for examples).
SynthSceneSpec parse_scene(const std::string& text);
SynthSceneSpec read_scene(const std::filesystem::path& path);
std::string format_scene(const SynthSceneSpec& scene);

/// Returns a copy with every primitive moved by `transform`.
SynthSceneSpec transform_scene(const SynthSceneSpec& scene, const Pose& transform);

struct ScanResult {
  PointCloud cloud;                 // sensor frame
  std::vector<std::uint32_t> rays;  // ray id (azimuth * beam_count + beam) of each point
  std::vector<double> ranges;       // measured range of each point, before float rounding
};

/// Casts every (beam, azimuth) ray from `sensor_pose` and keeps the nearest hit.
/// Noise is drawn from a generator seeded by (scene.seed, stream).
ScanResult cast_scan(const SynthSceneSpec& scene, const Pose& sensor_pose,
                     std::uint64_t stream = 0);
PointCloud synth_scan(const SynthSceneSpec& scene, const Pose& sensor_pose,
                      std::uint64_t stream = 0);

/// Sensor-frame unit direction of a ray id.
Eigen::Vector3d ray_direction(const SynthSceneSpec& scene, std::uint32_t ray);

/// Distance along a ray (origin, unit dir) to a primitive; negative if missed.
double intersect(const ScenePrimitive& primitive, const Eigen::Vector3d& origin,
                 const Eigen::Vector3d& dir, double min_t);

}  // namespace caelo
