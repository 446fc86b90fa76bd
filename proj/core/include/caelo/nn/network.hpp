#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "caelo/nn/tensor.hpp"

namespace caelo::nn {

enum class LayerKind { conv2d, conv3d, maxpool, upsample, dense, flatten, reshape };
enum class Activation { linear, relu, sigmoid };

/// One layer of a feed-forward network. Convolutions are stride 1 with
/// zero "same" padding; pooling and upsampling use window == stride.
/// `window` is (depth, height, width); 2D layers keep depth 1.
struct LayerSpec {
  LayerKind kind = LayerKind::flatten;
  std::array<int, 3> window{1, 1, 1};
  int units = 0;  // filters for convolutions, outputs for dense
  Activation activation = Activation::linear;
  std::vector<int> target_shape;  // reshape only

  static LayerSpec conv2d(int kh, int kw, int filters, Activation act);
  static LayerSpec conv3d(int k, int filters, Activation act);
  static LayerSpec maxpool2d(int p);
  static LayerSpec maxpool3d(int p);
  static LayerSpec upsample2d(int p);
  static LayerSpec upsample3d(int p);
  static LayerSpec dense(int units, Activation act);
  static LayerSpec flatten();
  static LayerSpec reshape(std::vector<int> shape);

  bool has_params() const noexcept {
    return kind == LayerKind::conv2d || kind == LayerKind::conv3d || kind == LayerKind::dense;
  }
};

std::string to_string(const LayerSpec& layer);

/// Output shape of `layer` for input `in`; throws ShapeError if incompatible.
std::vector<int> output_shape(const LayerSpec& layer, const std::vector<int>& in);

/// Sequential network with parameters in one flat buffer, layer by layer:
/// convolutions store weights [kd][kh][kw][cin][cout] then bias[cout];
/// dense layers store weights [in][out] then bias[out].
///
/// Networks are immutable during forward passes; concurrent forward calls
/// are safe.
template <typename T>
class BasicNetwork {
 public:
  /// `reference_input` fixes input channels and, for networks containing
  /// dense layers, the full input shape.
  BasicNetwork(std::vector<int> reference_input, std::vector<LayerSpec> layers);

  std::size_t layer_count() const noexcept { return layers_.size(); }
  const LayerSpec& layer(std::size_t i) const { return layers_.at(i); }
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  const std::vector<int>& reference_input() const noexcept { return reference_input_; }

  /// Output shape of every layer for `input`; throws ShapeError.
  std::vector<std::vector<int>> layer_shapes(const std::vector<int>& input) const;

  std::size_t param_count() const noexcept { return params_.size(); }
  std::span<T> params() noexcept { return params_; }
  std::span<const T> params() const noexcept { return params_; }
  std::span<T> layer_params(std::size_t i);
  std::span<const T> layer_params(std::size_t i) const;
  std::size_t layer_param_offset(std::size_t i) const { return offsets_.at(i); }

  /// Glorot-uniform weights, zero biases.
  void init_glorot(std::uint64_t seed);

  Tensor<T> forward(const Tensor<T>& input) const;
  /// Output of layer `last` (inclusive).
  Tensor<T> forward_to(const Tensor<T>& input, std::size_t last) const;
  /// Outputs of every layer, in order.
  std::vector<Tensor<T>> forward_trace(const Tensor<T>& input) const;

  /// Back-propagates dLoss/dOutput through a recorded trace and adds the
  /// parameter gradient into `grad` (length param_count()).
  void backward(const Tensor<T>& input, const std::vector<Tensor<T>>& trace,
                Tensor<T> grad_output, std::span<T> grad) const;

  /// Hash of the architecture (layers, input channels, parameter layout).
  std::uint64_t fingerprint() const;
  std::string architecture() const;

  template <typename U>
  BasicNetwork<U> cast() const {
    BasicNetwork<U> out(reference_input_, layers_);
    auto dst = out.params();
    for (std::size_t i = 0; i < params_.size(); ++i) dst[i] = static_cast<U>(params_[i]);
    return out;
  }

 private:
  void check_input(const Tensor<T>& input) const;

  std::vector<int> reference_input_;
  std::vector<LayerSpec> layers_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> counts_;
  std::vector<T> params_;
};

using Network = BasicNetwork<float>;

extern template class BasicNetwork<float>;
extern template class BasicNetwork<double>;

}  // namespace caelo::nn
