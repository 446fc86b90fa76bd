#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace caelo::nn {

/// Dense row-major tensor of up to 5 dimensions. Spatial tensors are
/// channels-last: [H, W, C] for images and [D, H, W, C] for volumes.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, T fill = T(0));
  Tensor(std::vector<int> shape, std::vector<T> data);

  const std::vector<int>& shape() const noexcept { return shape_; }
  int rank() const noexcept { return static_cast<int>(shape_.size()); }
  int dim(int axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
  std::size_t size() const noexcept { return data_.size(); }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  /// Changes the shape without touching data; element counts must agree.
  void reshape(std::vector<int> shape);
  bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<int> shape_;
  std::vector<T> data_;
};

std::size_t element_count(const std::vector<int>& shape);
std::string shape_string(const std::vector<int>& shape);

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace caelo::nn
