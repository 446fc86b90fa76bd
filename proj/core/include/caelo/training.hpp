#pragma once

#include <functional>
#include <span>
#include <vector>

#include "caelo/config.hpp"
#include "caelo/ingest.hpp"
#include "caelo/nn/cae.hpp"
#include "caelo/nn/train.hpp"

namespace caelo {

/// Random ring crops (train.crop_rows x train.crop_cols) from the frames.
std::vector<nn::Tensor<float>> cae2d_training_set(std::span<const PointCloud> frames, const Config& config);

/// Voxel patches around interest points detected by `cae2d`: each sample
/// picks a random frame, one of its interest points and one resolution.
std::vector<nn::Tensor<float>> cae3d_training_set(std::span<const PointCloud> frames,
                                                  const nn::CaeNetwork& cae2d, const Config& config);

/// Trains `net` with the optimizer settings of `config`.
nn::TrainReport train_network(nn::CaeNetwork& net, std::span<const nn::Tensor<float>> samples,
                              const Config& config,
                              const std::function<void(int, double)>& on_epoch = {});

}  // namespace caelo
