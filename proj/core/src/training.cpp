#include "caelo/training.hpp"

#include <memory>
#include <random>
#include <stdexcept>

#include "caelo/describe.hpp"
#include "caelo/detect.hpp"
#include "caelo/parallel.hpp"
#include "caelo/sphering.hpp"
#include "caelo/voxels.hpp"

namespace caelo {

namespace {

PointCloud corrected(const PointCloud& cloud, const Config& config) {
  PointCloud out = cloud;
  if (config.vertical_correction_deg != 0.0) apply_vertical_correction(out, deg2rad(config.vertical_correction_deg));
  return out;
}

}  // namespace

std::vector<nn::Tensor<float>> cae2d_training_set(std::span<const PointCloud> frames, const Config& config) {
  if (frames.empty()) throw std::invalid_argument("no frames to train on");
  std::vector<nn::Tensor<float>> rings(frames.size());
  parallel_for(frames.size(), config.threads, [&](std::size_t i) {
    rings[i] = ring_tensor(project(corrected(frames[i], config), config.ring_params()), config.crop);
  });
  std::mt19937_64 rng(config.train.seed);
  return random_crops(rings, config.train.crop_rows, config.train.crop_cols, config.train.crops, rng);
}

std::vector<nn::Tensor<float>> cae3d_training_set(std::span<const PointCloud> frames,
                                                  const nn::CaeNetwork& cae2d, const Config& config) {
  if (frames.empty()) throw std::invalid_argument("no frames to train on");
  struct Frame {
    std::vector<PixelPoint> points;
    std::unique_ptr<VoxelIndexSet> voxels;
  };
  std::vector<Frame> data(frames.size());
  parallel_for(frames.size(), config.threads, [&](std::size_t i) {
    const PointCloud cloud = corrected(frames[i], config);
    data[i].points = detect(project(cloud, config.ring_params()), cae2d, config.detector, config.crop);
    data[i].voxels = std::make_unique<VoxelIndexSet>(voxelize(cloud, config.voxel_resolutions()));
  });
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data[i].points.empty()) usable.push_back(i);
  }
  if (usable.empty()) throw std::runtime_error("no interest points detected in the training frames");

  std::mt19937_64 rng(config.train.seed + 1);
  std::vector<nn::Tensor<float>> out;
  out.reserve(config.train.patches);
  for (std::size_t n = 0; n < config.train.patches; ++n) {
    const Frame& f = data[usable[rng() % usable.size()]];
    const PixelPoint& p = f.points[rng() % f.points.size()];
    const std::size_t level = rng() % VoxelResolutionSet::kLevels;
    out.push_back(patch_tensor(extract_patch(*f.voxels, p.xyz, level)));
  }
  return out;
}

nn::TrainReport train_network(nn::CaeNetwork& net, std::span<const nn::Tensor<float>> samples,
                              const Config& config, const std::function<void(int, double)>& on_epoch) {
  nn::TrainOptions opts;
  opts.epochs = config.train.epochs;
  opts.batch = config.train.batch;
  opts.adam = config.train.adam;
  opts.seed = config.train.seed;
  opts.threads = config.threads;
  opts.on_epoch = on_epoch;
  return nn::train(net.net, net.loss, samples, opts);
}

}  // namespace caelo
