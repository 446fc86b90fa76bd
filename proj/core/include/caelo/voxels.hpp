#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "caelo/ingest.hpp"

namespace caelo {

/// Three voxel sizes S1 < S2 = 8 S1 < S3 = 32 S1 sharing one patch size.
class VoxelResolutionSet {
 public:
  static constexpr std::size_t kLevels = 3;

  /// Defaults: S1 = 0.02 m, 16^3 voxel patches.
  VoxelResolutionSet() : VoxelResolutionSet(0.02, 16) {}
  /// Throws std::invalid_argument unless base_size > 0 and patch_size is a
  /// positive even number.
  VoxelResolutionSet(double base_size, int patch_size);

  double size(std::size_t level) const { return sizes_.at(level); }
  const std::array<double, kLevels>& sizes() const noexcept { return sizes_; }
  int patch_size() const noexcept { return patch_size_; }

 private:
  std::array<double, kLevels> sizes_;
  int patch_size_;
};

/// Edge length in meters covered by one patch at `level`.
double coverage_extent(const VoxelResolutionSet& res, std::size_t level);

struct VoxelKey {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  friend bool operator==(const VoxelKey&, const VoxelKey&) = default;
  friend auto operator<=>(const VoxelKey&, const VoxelKey&) = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint32_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint32_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Mathematical floor of p / size per axis.
VoxelKey voxel_of(const Eigen::Vector3f& p, double size);

/// Occupied voxel indices of one cloud at every resolution.
class VoxelIndexSet {
 public:
  explicit VoxelIndexSet(VoxelResolutionSet res) : res_(res) {}

  const VoxelResolutionSet& resolutions() const noexcept { return res_; }
  bool contains(std::size_t level, const VoxelKey& key) const {
    return levels_.at(level).contains(key);
  }
  std::size_t count(std::size_t level) const { return levels_.at(level).size(); }
  void insert(std::size_t level, const VoxelKey& key) { levels_.at(level).insert(key); }
  void reserve(std::size_t n);

  /// Keys of one level in ascending (x, y, z) order.
  std::vector<VoxelKey> sorted_keys(std::size_t level) const;

 private:
  VoxelResolutionSet res_;
  std::array<std::unordered_set<VoxelKey, VoxelKeyHash>, VoxelResolutionSet::kLevels> levels_;
};

VoxelIndexSet voxelize(const PointCloud& cloud, const VoxelResolutionSet& res);

/// Binary occupancy cube around a point. Cell (i, j, k) is stored at
/// (i * S + j) * S + k and covers global voxel (v.x - S/2 + i, v.y - S/2 + j, v.z - S/2 + k)
/// where v is the voxel containing `center`.
struct VoxelPatch {
  int size = 0;
  std::vector<std::uint8_t> occupancy;
  Eigen::Vector3f center = Eigen::Vector3f::Zero();
  double resolution = 0.0;

  std::uint8_t at(int i, int j, int k) const {
    return occupancy[(static_cast<std::size_t>(i) * size + j) * size + k];
  }
  std::size_t occupied() const noexcept;
};

VoxelPatch extract_patch(const VoxelIndexSet& voxels, const Eigen::Vector3f& point, std::size_t level);

/// Debug dump: one "x y z" line per key, sorted, levels separated by "# level N".
void dump_voxels(const VoxelIndexSet& voxels, std::ostream& out);

}  // namespace caelo
