#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "caelo/nn/cae.hpp"
#include "caelo/nn/network.hpp"

namespace caelo::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
class Adam {
 public:
  Adam(std::size_t n, AdamOptions options);
  void step(std::span<T> params, std::span<const T> grad);
  std::size_t steps() const noexcept { return t_; }

 private:
  AdamOptions opt_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

struct TrainOptions {
  int epochs = 10;
  int batch = 32;
  AdamOptions adam;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Evaluate the whole dataset before and after training.
  bool measure_endpoints = true;
  std::function<void(int epoch, double loss)> on_epoch;
};

struct TrainReport {
  std::vector<double> epoch_loss;  // mean minibatch loss of each epoch
  double initial_loss = 0.0;       // dataset loss before the first update
  double final_loss = 0.0;         // dataset loss after the last update
  std::size_t steps = 0;
};

/// Trains an auto-encoder (target = input) with Adam. Sample order is
/// reshuffled every epoch from `seed`; the result is bit-reproducible and
/// independent of `threads`. Throws DivergenceError on a non-finite loss.
template <typename T>
TrainReport train(BasicNetwork<T>& net, Loss loss, std::span<const Tensor<T>> dataset,
                  const TrainOptions& options);

template <typename T>
double dataset_loss(const BasicNetwork<T>& net, Loss loss, std::span<const Tensor<T>> dataset,
                    int threads = 1);

extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace caelo::nn
