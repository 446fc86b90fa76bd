#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "caelo/ingest.hpp"

namespace caelo {

/// Angular binning of the spherical ring. Columns follow
///   c = floor((pi - atan2(y, x)) / delta_alpha)
/// and rows
///   r = floor(H - (asin(z / |p|) / delta_beta - beta_down / delta_beta)).
struct RingParams {
  double delta_alpha = 0.0;  // radians per column
  double delta_beta = 0.0;   // radians per row
  double beta_down = 0.0;    // pitch of the lowest beam, radians
  int rows = 0;
  int cols = 0;  // ceil(2 pi / delta_alpha)

  static constexpr int kChannels = 3;

  /// Builds params from degrees; `cols` is derived from delta_alpha.
  static RingParams from_degrees(double delta_alpha_deg, double delta_beta_deg,
                                 double beta_down_deg, int rows);
  /// Velodyne HDL-64E layout used for KITTI: 0.2 deg, 0.4254 deg, -24.8 deg, 69 rows.
  static RingParams kitti();

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct PixelPoint {
  int r = 0;
  int c = 0;
  Eigen::Vector3f xyz = Eigen::Vector3f::Zero();
};

/// H x W x 3 grid of projected coordinates plus the validity mask.
/// Invalid pixels hold zeros.
class SphericalRing {
 public:
  SphericalRing() = default;
  SphericalRing(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  bool valid(int r, int c) const { return mask_[index(r, c)] != 0; }
  bool in_bounds(int r, int c) const noexcept { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }
  Eigen::Vector3f at(int r, int c) const;
  void set(int r, int c, const Eigen::Vector3f& xyz);

  std::size_t valid_count() const noexcept;

  std::span<const float> grid() const noexcept { return grid_; }
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }

  friend bool operator==(const SphericalRing&, const SphericalRing&) = default;

 private:
  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<float> grid_;
  std::vector<std::uint8_t> mask_;
};

struct ProjectStats {
  std::size_t projected = 0;
  std::size_t out_of_range = 0;
  std::size_t overwritten = 0;
};

/// Ring pixel of a point, or false when it falls outside [0,H) x [0,W).
bool pixel_of(const Eigen::Vector3f& p, const RingParams& params, int& r, int& c);

/// Later points overwrite earlier ones landing in the same pixel.
SphericalRing project(const PointCloud& cloud, const RingParams& params,
                      ProjectStats* stats = nullptr);

/// Stored coordinates of a valid pixel; throws InvalidPixelError otherwise.
Eigen::Vector3f unproject(const SphericalRing& ring, int r, int c);

/// Every valid pixel, row-major.
PointCloud ring_points(const SphericalRing& ring);

/// Union of valid pixels inside the (2 half + 1)^2 window of each seed,
/// deduplicated, returned in row-major pixel order. Columns do not wrap.
PointCloud extract_eips(const SphericalRing& ring, std::span<const PixelPoint> seeds, int half);

/// Binary dump: int32 H, W, C; float32 grid row-major; mask bit-packed
/// row-major, least significant bit first.
void write_ring(const SphericalRing& ring, const std::filesystem::path& path);
SphericalRing read_ring(const std::filesystem::path& path);

}  // namespace caelo
