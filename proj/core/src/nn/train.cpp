#include "caelo/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "caelo/error.hpp"
#include "caelo/parallel.hpp"

namespace caelo::nn {

namespace {

// Gradients of a minibatch are accumulated into a fixed number of slots
// (sample i -> slot i % kSlots) and summed in slot order, so the arithmetic
// does not depend on how many threads run the slots.
constexpr std::size_t kSlots = 4;

}  // namespace

template <typename T>
Adam<T>::Adam(std::size_t n, AdamOptions options) : opt_(options), m_(n, 0.0), v_(n, 0.0) {}

template <typename T>
void Adam<T>::step(std::span<T> params, std::span<const T> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Adam: parameter count changed");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = static_cast<double>(grad[i]);
    m_[i] = opt_.beta1 * m_[i] + (1.0 - opt_.beta1) * g;
    v_[i] = opt_.beta2 * v_[i] + (1.0 - opt_.beta2) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] = static_cast<T>(static_cast<double>(params[i]) - opt_.lr * m_hat / (std::sqrt(v_hat) + opt_.epsilon));
  }
}

template <typename T>
double dataset_loss(const BasicNetwork<T>& net, Loss loss, std::span<const Tensor<T>> dataset, int threads) {
  if (dataset.empty()) throw std::invalid_argument("dataset is empty");
  std::vector<double> losses(dataset.size());
  parallel_for(dataset.size(), threads, [&](std::size_t i) {
    losses[i] = loss_value(loss, net.forward(dataset[i]), dataset[i]);
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(dataset.size());
}

template <typename T>
TrainReport train(BasicNetwork<T>& net, Loss loss, std::span<const Tensor<T>> dataset,
                  const TrainOptions& options) {
  if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
  if (options.epochs < 1 || options.batch < 1) throw std::invalid_argument("epochs and batch must be >= 1");

  TrainReport report;
  if (options.measure_endpoints) report.initial_loss = dataset_loss(net, loss, dataset, options.threads);

  const std::size_t n_params = net.param_count();
  Adam<T> adam(n_params, options.adam);
  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<std::vector<T>> slot_grads(kSlots, std::vector<T>(n_params));
  std::vector<T> grad(n_params);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(options.batch)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(options.batch));
      const std::size_t count = end - begin;
      const std::size_t slots = std::min(kSlots, count);
      std::vector<double> sample_loss(count);

      parallel_for(slots, options.threads, [&](std::size_t slot) {
        std::vector<T>& g = slot_grads[slot];
        std::fill(g.begin(), g.end(), T(0));
        for (std::size_t k = slot; k < count; k += slots) {
          const Tensor<T>& x = dataset[order[begin + k]];
          auto trace = net.forward_trace(x);
          sample_loss[k] = loss_value(loss, trace.back(), x);
          net.backward(x, trace, loss_gradient(loss, trace.back(), x), g);
        }
      });

      double batch_loss = 0.0;
      for (double l : sample_loss) batch_loss += l;
      if (!std::isfinite(batch_loss)) {
        throw DivergenceError("training loss became non-finite in epoch " + std::to_string(epoch + 1));
      }
      epoch_sum += batch_loss;

      const T inv = T(1) / static_cast<T>(count);
      for (std::size_t i = 0; i < n_params; ++i) {
        T s = T(0);
        for (std::size_t slot = 0; slot < slots; ++slot) s += slot_grads[slot][i];
        grad[i] = s * inv;
      }
      adam.step(net.params(), grad);
    }
    const double mean = epoch_sum / static_cast<double>(order.size());
    report.epoch_loss.push_back(mean);
    if (options.on_epoch) options.on_epoch(epoch + 1, mean);
  }
  report.steps = adam.steps();
  if (options.measure_endpoints) {
    report.final_loss = dataset_loss(net, loss, dataset, options.threads);
    if (!std::isfinite(report.final_loss)) throw DivergenceError("final training loss is non-finite");
  }
  return report;
}

template class Adam<float>;
template class Adam<double>;
template TrainReport train<float>(BasicNetwork<float>&, Loss, std::span<const Tensor<float>>, const TrainOptions&);
template TrainReport train<double>(BasicNetwork<double>&, Loss, std::span<const Tensor<double>>, const TrainOptions&);
template double dataset_loss<float>(const BasicNetwork<float>&, Loss, std::span<const Tensor<float>>, int);
template double dataset_loss<double>(const BasicNetwork<double>&, Loss, std::span<const Tensor<double>>, int);

}  // namespace caelo::nn
