#include "caelo/voxels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace caelo {

VoxelResolutionSet::VoxelResolutionSet(double base_size, int patch_size)
    : sizes_{base_size, 8.0 * base_size, 32.0 * base_size}, patch_size_(patch_size) {
  if (!(base_size > 0.0)) throw std::invalid_argument("voxel size must be > 0");
  if (patch_size <= 0 || patch_size % 2 != 0) {
    throw std::invalid_argument("patch size must be a positive even number");
  }
}

double coverage_extent(const VoxelResolutionSet& res, std::size_t level) {
  return res.patch_size() * res.size(level);
}

VoxelKey voxel_of(const Eigen::Vector3f& p, double size) {
  return {static_cast<std::int32_t>(std::floor(p.x() / size)),
          static_cast<std::int32_t>(std::floor(p.y() / size)),
          static_cast<std::int32_t>(std::floor(p.z() / size))};
}

void VoxelIndexSet::reserve(std::size_t n) {
  for (auto& level : levels_) level.reserve(n);
}

std::vector<VoxelKey> VoxelIndexSet::sorted_keys(std::size_t level) const {
  std::vector<VoxelKey> keys(levels_.at(level).begin(), levels_.at(level).end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

VoxelIndexSet voxelize(const PointCloud& cloud, const VoxelResolutionSet& res) {
  VoxelIndexSet set(res);
  set.reserve(cloud.size());
  for (std::size_t level = 0; level < VoxelResolutionSet::kLevels; ++level) {
    const double size = res.size(level);
    for (const Eigen::Vector3f& p : cloud.points) set.insert(level, voxel_of(p, size));
  }
  return set;
}

std::size_t VoxelPatch::occupied() const noexcept {
  return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 1));
}

VoxelPatch extract_patch(const VoxelIndexSet& voxels, const Eigen::Vector3f& point, std::size_t level) {
  const int s = voxels.resolutions().patch_size();
  VoxelPatch patch;
  patch.size = s;
  patch.center = point;
  patch.resolution = voxels.resolutions().size(level);
  patch.occupancy.assign(static_cast<std::size_t>(s) * s * s, 0);
  if (voxels.count(level) == 0) return patch;

  const VoxelKey v = voxel_of(point, patch.resolution);
  const int half = s / 2;
  std::size_t idx = 0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      for (int k = 0; k < s; ++k, ++idx) {
        const VoxelKey key{v.x - half + i, v.y - half + j, v.z - half + k};
        if (voxels.contains(level, key)) patch.occupancy[idx] = 1;
      }
    }
  }
  return patch;
}

void dump_voxels(const VoxelIndexSet& voxels, std::ostream& out) {
  for (std::size_t level = 0; level < VoxelResolutionSet::kLevels; ++level) {
    out << "# level " << level << " size " << voxels.resolutions().size(level) << '\n';
    for (const VoxelKey& k : voxels.sorted_keys(level)) {
      out << k.x << ' ' << k.y << ' ' << k.z << '\n';
    }
  }
}

}  // namespace caelo
