#include "caelo/describe.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "caelo/error.hpp"
#include "caelo/parallel.hpp"

namespace caelo {

namespace {

constexpr char kMagic[8] = {'c', 'a', 'e', 'l', 'o', '-', 'f', '1'};

template <typename V>
void put(std::ostream& out, const V& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(V));
}

template <typename V>
void get(std::istream& in, V& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(V));
  if (!in) throw ParseError("feature file truncated");
}

}  // namespace

nn::Tensor<float> patch_tensor(const VoxelPatch& patch) {
  nn::Tensor<float> t({patch.size, patch.size, patch.size, 1});
  for (std::size_t i = 0; i < patch.occupancy.size(); ++i) t[i] = patch.occupancy[i] ? 1.0f : 0.0f;
  return t;
}

std::vector<float> encode_patch(const VoxelPatch& patch, const nn::CaeNetwork& net3d) {
  const auto code = net3d.net.forward_to(patch_tensor(patch), net3d.feature_layer);
  return {code.values().begin(), code.values().end()};
}

Feature describe(const Eigen::Vector3f& point, const VoxelIndexSet& voxels,
                 const nn::CaeNetwork& net3d, bool normalize) {
  Feature f{};
  for (std::size_t level = 0; level < VoxelResolutionSet::kLevels; ++level) {
    const auto code = encode_patch(extract_patch(voxels, point, level), net3d);
    if (code.size() != kCodeSize) {
      throw ShapeError("3D network code has " + std::to_string(code.size()) + " values, expected " +
                       std::to_string(kCodeSize));
    }
    std::copy(code.begin(), code.end(), f.begin() + static_cast<std::ptrdiff_t>(level * kCodeSize));
  }
  if (normalize) {
    double sum = 0.0;
    for (float v : f) sum += static_cast<double>(v) * v;
    if (sum > 0.0) {
      const double inv = 1.0 / std::sqrt(sum);
      for (float& v : f) v = static_cast<float>(v * inv);
    }
  }
  return f;
}

std::vector<Feature> batch_describe(std::span<const Eigen::Vector3f> points,
                                   const VoxelIndexSet& voxels, const nn::CaeNetwork& net3d,
                                   const DescribeOptions& options) {
  std::vector<Feature> out(points.size());
  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    out[i] = describe(points[i], voxels, net3d, options.normalize);
  });
  return out;
}

void write_features(const std::filesystem::path& path, std::span<const PixelPoint> points,
                    std::span<const Feature> features) {
  static_assert(std::endian::native == std::endian::little);
  if (points.size() != features.size()) throw std::invalid_argument("point/feature count mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put(out, static_cast<std::uint64_t>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    put(out, static_cast<std::int32_t>(points[i].r));
    put(out, static_cast<std::int32_t>(points[i].c));
    for (int k = 0; k < 3; ++k) put(out, points[i].xyz[k]);
    out.write(reinterpret_cast<const char*>(features[i].data()), sizeof(Feature));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void read_features(const std::filesystem::path& path, std::vector<PixelPoint>& points,
                   std::vector<Feature>& features) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw ParseError("not a caelo-f1 feature file");
  std::uint64_t count = 0;
  get(in, count);
  points.clear();
  features.clear();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::int32_t r = 0, c = 0;
    PixelPoint p;
    get(in, r);
    get(in, c);
    p.r = r;
    p.c = c;
    for (int k = 0; k < 3; ++k) get(in, p.xyz[k]);
    Feature f;
    in.read(reinterpret_cast<char*>(f.data()), sizeof(Feature));
    if (!in) throw ParseError("feature file truncated");
    points.push_back(p);
    features.push_back(f);
  }
}

}  // namespace caelo
