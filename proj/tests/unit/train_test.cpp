#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "caelo/error.hpp"
#include "caelo/nn/cae.hpp"
#include "caelo/nn/train.hpp"

namespace caelo::nn {
namespace {

std::vector<Tensor<float>> smooth_images(int count, int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Tensor<float>> out;
  for (int n = 0; n < count; ++n) {
    Tensor<float> t({rows, cols, 3});
    const double a = u(rng) * 6.0;
    const double b = u(rng) * 6.0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const std::size_t i = (static_cast<std::size_t>(r) * cols + c) * 3;
        t[i] = static_cast<float>(std::sin(a + 0.3 * r) * 2.0);
        t[i + 1] = static_cast<float>(std::cos(b + 0.2 * c));
        t[i + 2] = static_cast<float>(0.5 * (r - c) / rows);
      }
    out.push_back(std::move(t));
  }
  return out;
}

TEST(Adam, FirstStepMovesEachParameterByLearningRate) {
  Adam<double> adam(3, {0.01, 0.9, 0.999, 1e-8});
  std::vector<double> p{1.0, 2.0, 3.0};
  const std::vector<double> g{0.5, -4.0, 0.0};
  adam.step(p, g);
  EXPECT_NEAR(p[0], 0.99, 1e-9);
  EXPECT_NEAR(p[1], 2.01, 1e-9);
  EXPECT_EQ(p[2], 3.0);
  EXPECT_EQ(adam.steps(), 1u);
}

TEST(Train, ReproducibleAndThreadIndependent) {
  const auto data = smooth_images(20, 8, 8, 3);
  TrainOptions opt;
  opt.epochs = 2;
  opt.batch = 6;
  opt.seed = 9;
  CaeNetwork a = make_cae2d(8, 8, 4, {4, 3, 4, 4, 3});
  CaeNetwork b = a;
  CaeNetwork c = a;
  const auto ra = train(a.net, a.loss, std::span<const Tensor<float>>(data), opt);
  const auto rb = train(b.net, b.loss, std::span<const Tensor<float>>(data), opt);
  opt.threads = 3;
  const auto rc = train(c.net, c.loss, std::span<const Tensor<float>>(data), opt);
  EXPECT_EQ(ra.epoch_loss, rb.epoch_loss);
  EXPECT_EQ(ra.epoch_loss, rc.epoch_loss);
  EXPECT_TRUE(std::equal(a.net.params().begin(), a.net.params().end(), c.net.params().begin()));
  EXPECT_EQ(ra.steps, 2u * 4u);
}

TEST(Train, TwoDimensionalLossDecreases) {
  const auto data = smooth_images(32, 8, 16, 5);
  TrainOptions opt;
  opt.epochs = 8;
  opt.batch = 8;
  opt.adam.lr = 3e-3;
  CaeNetwork net = make_cae2d(8, 16, 6, {8, 4, 8, 8, 4});
  const auto r = train(net.net, net.loss, std::span<const Tensor<float>>(data), opt);
  EXPECT_LE(r.final_loss, r.initial_loss * 0.95);
  EXPECT_EQ(r.epoch_loss.size(), 8u);
  EXPECT_NEAR(r.final_loss, dataset_loss(net.net, net.loss, std::span<const Tensor<float>>(data)), 1e-12);
}

TEST(Train, EmptyPatchesAreLearnedAsEmpty) {
  std::vector<Tensor<float>> data(16, Tensor<float>({8, 8, 8, 1}));
  TrainOptions opt;
  opt.epochs = 100;
  opt.batch = 4;
  opt.adam.lr = 5e-2;
  CaeNetwork net{Network({8, 8, 8, 1}, cae3d_layers(8, {2, 2, 2, 6, 4})), Loss::bce, kCae3dCodeLayer};
  net.net.init_glorot(7);
  const auto r = train(net.net, net.loss, std::span<const Tensor<float>>(data), opt);
  EXPECT_LT(r.final_loss, 0.01);
}

TEST(Train, OnEpochCallbackSeesEveryEpoch) {
  const auto data = smooth_images(4, 4, 4, 8);
  TrainOptions opt;
  opt.epochs = 3;
  opt.batch = 2;
  int calls = 0;
  opt.on_epoch = [&](int epoch, double loss) {
    EXPECT_EQ(epoch, calls + 1);
    EXPECT_TRUE(std::isfinite(loss));
    ++calls;
  };
  CaeNetwork net = make_cae2d(4, 4, 1, {2, 2, 2, 2, 2});
  train(net.net, net.loss, std::span<const Tensor<float>>(data), opt);
  EXPECT_EQ(calls, 3);
}

TEST(Train, NonFiniteLossRaises) {
  auto data = smooth_images(4, 4, 4, 8);
  data[2][5] = std::numeric_limits<float>::infinity();
  TrainOptions opt;
  opt.epochs = 1;
  opt.batch = 2;
  CaeNetwork net = make_cae2d(4, 4, 1, {2, 2, 2, 2, 2});
  EXPECT_THROW(train(net.net, net.loss, std::span<const Tensor<float>>(data), opt), DivergenceError);
}

TEST(Train, RejectsBadOptions) {
  const auto data = smooth_images(2, 4, 4, 8);
  CaeNetwork net = make_cae2d(4, 4, 1, {2, 2, 2, 2, 2});
  TrainOptions opt;
  opt.batch = 0;
  EXPECT_THROW(train(net.net, net.loss, std::span<const Tensor<float>>(data), opt), std::invalid_argument);
  opt.batch = 2;
  EXPECT_THROW(train(net.net, net.loss, std::span<const Tensor<float>>(), opt), std::invalid_argument);
}

}  // namespace
}  // namespace caelo::nn
