#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "caelo/nn/cae.hpp"
#include "caelo/sphering.hpp"
#include "caelo/voxels.hpp"

namespace caelo {

inline constexpr std::size_t kCodeSize = 20;
inline constexpr std::size_t kFeatureSize = kCodeSize * VoxelResolutionSet::kLevels;

/// Codes of the three patches of one point, finest resolution first.
using Feature = std::array<float, kFeatureSize>;

struct DescribeOptions {
  bool normalize = false;  // scale each feature to unit L2 norm
  int threads = 1;
};

/// Patch as an S x S x S x 1 network input.
nn::Tensor<float> patch_tensor(const VoxelPatch& patch);

/// Code-layer output of the 3D auto-encoder for one patch.
std::vector<float> encode_patch(const VoxelPatch& patch, const nn::CaeNetwork& net3d);

Feature describe(const Eigen::Vector3f& point, const VoxelIndexSet& voxels,
                 const nn::CaeNetwork& net3d, bool normalize = false);

std::vector<Feature> batch_describe(std::span<const Eigen::Vector3f> points,
                                   const VoxelIndexSet& voxels, const nn::CaeNetwork& net3d,
                                   const DescribeOptions& options = {});

/// Binary feature dump: magic "caelo-f1", u64 count, then per point
/// int32 r, int32 c, float32 xyz[3], float32 feature[60].
void write_features(const std::filesystem::path& path, std::span<const PixelPoint> points,
                    std::span<const Feature> features);
void read_features(const std::filesystem::path& path, std::vector<PixelPoint>& points,
                   std::vector<Feature>& features);

}  // namespace caelo
