#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "caelo/nn/network.hpp"

namespace caelo::nn {

enum class Loss { mse, bce };

/// Channel widths of the 2D auto-encoder; defaults are the published sizes.
struct Cae2dWidths {
  int conv1 = 32;
  int response = 8;
  int conv3 = 16;
  int conv4 = 16;
  int conv5 = 8;
};

/// Widths of the 3D auto-encoder; defaults are the published sizes.
struct Cae3dWidths {
  int conv1 = 8;
  int conv2 = 16;
  int conv3 = 32;
  int hidden = 200;
  int code = 20;
};

/// Index of the layer whose activations describe each ring pixel.
inline constexpr std::size_t kCae2dResponseLayer = 1;
/// Index of the linear dense layer producing the patch code.
inline constexpr std::size_t kCae3dCodeLayer = 7;

/// Ten layers: conv3x3, conv1x1 (response), pool, conv3x3, pool, conv3x3,
/// up, conv3x3, up, conv1x1 linear.
std::vector<LayerSpec> cae2d_layers(const Cae2dWidths& widths = {});
/// Sixteen layers: three conv/pool stages down to 4^3, flatten, dense
/// hidden/code/hidden/flat, reshape, conv-up-conv-up-conv with sigmoid out.
/// Requires patch_size divisible by 4.
std::vector<LayerSpec> cae3d_layers(int patch_size, const Cae3dWidths& widths = {});

/// An auto-encoder plus its training loss and the layer read at inference.
struct CaeNetwork {
  Network net;
  Loss loss;
  std::size_t feature_layer;
};

/// 2D CAE over `rows` x `cols` x 3 inputs (reference size only; the network
/// is fully convolutional and accepts any size divisible by 4).
CaeNetwork make_cae2d(int rows, int cols, std::uint64_t seed, const Cae2dWidths& widths = {});
CaeNetwork make_cae3d(int patch_size, std::uint64_t seed, const Cae3dWidths& widths = {});

/// Mean loss over all elements. BCE clamps predictions to [1e-7, 1 - 1e-7].
template <typename T>
double loss_value(Loss loss, const Tensor<T>& prediction, const Tensor<T>& target);
/// dLoss/dPrediction of loss_value.
template <typename T>
Tensor<T> loss_gradient(Loss loss, const Tensor<T>& prediction, const Tensor<T>& target);

inline constexpr double kBceEpsilon = 1e-7;

}  // namespace caelo::nn
