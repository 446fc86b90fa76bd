#include "caelo/nn/cae.hpp"

#include <algorithm>
#include <cmath>

#include "caelo/error.hpp"

namespace caelo::nn {

std::vector<LayerSpec> cae2d_layers(const Cae2dWidths& w) {
  using A = Activation;
  return {
      LayerSpec::conv2d(3, 3, w.conv1, A::relu),
      LayerSpec::conv2d(1, 1, w.response, A::relu),
      LayerSpec::maxpool2d(2),
      LayerSpec::conv2d(3, 3, w.conv3, A::relu),
      LayerSpec::maxpool2d(2),
      LayerSpec::conv2d(3, 3, w.conv4, A::relu),
      LayerSpec::upsample2d(2),
      LayerSpec::conv2d(3, 3, w.conv5, A::relu),
      LayerSpec::upsample2d(2),
      LayerSpec::conv2d(1, 1, 3, A::linear),
  };
}

std::vector<LayerSpec> cae3d_layers(int patch_size, const Cae3dWidths& w) {
  if (patch_size <= 0 || patch_size % 4 != 0) {
    throw ShapeError("3D CAE patch size must be a positive multiple of 4");
  }
  using A = Activation;
  const int q = patch_size / 4;
  const int flat = q * q * q * w.conv3;
  return {
      LayerSpec::conv3d(3, w.conv1, A::relu),
      LayerSpec::maxpool3d(2),
      LayerSpec::conv3d(3, w.conv2, A::relu),
      LayerSpec::maxpool3d(2),
      LayerSpec::conv3d(3, w.conv3, A::relu),
      LayerSpec::flatten(),
      LayerSpec::dense(w.hidden, A::relu),
      LayerSpec::dense(w.code, A::linear),
      LayerSpec::dense(w.hidden, A::relu),
      LayerSpec::dense(flat, A::relu),
      LayerSpec::reshape({q, q, q, w.conv3}),
      LayerSpec::conv3d(3, w.conv2, A::relu),
      LayerSpec::upsample3d(2),
      LayerSpec::conv3d(3, w.conv1, A::relu),
      LayerSpec::upsample3d(2),
      LayerSpec::conv3d(3, 1, A::sigmoid),
  };
}

CaeNetwork make_cae2d(int rows, int cols, std::uint64_t seed, const Cae2dWidths& widths) {
  CaeNetwork cae{Network({rows, cols, 3}, cae2d_layers(widths)), Loss::mse, kCae2dResponseLayer};
  cae.net.init_glorot(seed);
  return cae;
}

CaeNetwork make_cae3d(int patch_size, std::uint64_t seed, const Cae3dWidths& widths) {
  CaeNetwork cae{Network({patch_size, patch_size, patch_size, 1}, cae3d_layers(patch_size, widths)),
                 Loss::bce, kCae3dCodeLayer};
  cae.net.init_glorot(seed);
  return cae;
}

template <typename T>
double loss_value(Loss loss, const Tensor<T>& prediction, const Tensor<T>& target) {
  if (prediction.shape() != target.shape()) throw ShapeError("loss: prediction/target shape mismatch");
  const std::size_t n = prediction.size();
  double sum = 0.0;
  if (loss == Loss::mse) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(prediction[i]) - static_cast<double>(target[i]);
      sum += d * d;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::clamp(static_cast<double>(prediction[i]), kBceEpsilon, 1.0 - kBceEpsilon);
      const double y = static_cast<double>(target[i]);
      sum -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
  }
  return sum / static_cast<double>(n);
}

template <typename T>
Tensor<T> loss_gradient(Loss loss, const Tensor<T>& prediction, const Tensor<T>& target) {
  if (prediction.shape() != target.shape()) throw ShapeError("loss: prediction/target shape mismatch");
  const std::size_t n = prediction.size();
  const double scale = 1.0 / static_cast<double>(n);
  Tensor<T> grad(prediction.shape());
  if (loss == Loss::mse) {
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = static_cast<T>(2.0 * scale * (static_cast<double>(prediction[i]) - static_cast<double>(target[i])));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = static_cast<double>(prediction[i]);
      if (p < kBceEpsilon || p > 1.0 - kBceEpsilon) continue;  // clamp has zero slope
      const double y = static_cast<double>(target[i]);
      grad[i] = static_cast<T>(scale * (-(y / p) + (1.0 - y) / (1.0 - p)));
    }
  }
  return grad;
}

template double loss_value<float>(Loss, const Tensor<float>&, const Tensor<float>&);
template double loss_value<double>(Loss, const Tensor<double>&, const Tensor<double>&);
template Tensor<float> loss_gradient<float>(Loss, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> loss_gradient<double>(Loss, const Tensor<double>&, const Tensor<double>&);

}  // namespace caelo::nn
