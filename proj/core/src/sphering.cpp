#include "caelo/sphering.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "caelo/error.hpp"

namespace caelo {

RingParams RingParams::from_degrees(double delta_alpha_deg, double delta_beta_deg,
                                    double beta_down_deg, int rows) {
  RingParams p;
  p.delta_alpha = deg2rad(delta_alpha_deg);
  p.delta_beta = deg2rad(delta_beta_deg);
  p.beta_down = deg2rad(beta_down_deg);
  p.rows = rows;
  // 360 / 0.2 is 1800 in exact arithmetic; the epsilon absorbs rounding
  // of 2 pi / delta_alpha to just above an integer.
  p.cols = static_cast<int>(std::ceil(360.0 / delta_alpha_deg - 1e-9));
  return p;
}

RingParams RingParams::kitti() { return from_degrees(0.2, 0.4254, -24.8, 69); }

void RingParams::validate() const {
  if (!(delta_alpha > 0.0) || !(delta_beta > 0.0)) {
    throw std::invalid_argument("ring angular resolutions must be > 0");
  }
  if (rows < 1) throw std::invalid_argument("ring rows must be >= 1");
  const int expected = static_cast<int>(std::ceil(2.0 * std::numbers::pi / delta_alpha - 1e-9));
  if (cols != expected) {
    throw std::invalid_argument("ring cols must equal ceil(2 pi / delta_alpha) = " +
                                std::to_string(expected));
  }
}

SphericalRing::SphericalRing(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      grid_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 3, 0.0f),
      mask_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative ring size");
}

Eigen::Vector3f SphericalRing::at(int r, int c) const {
  const std::size_t i = 3 * index(r, c);
  return {grid_[i], grid_[i + 1], grid_[i + 2]};
}

void SphericalRing::set(int r, int c, const Eigen::Vector3f& xyz) {
  const std::size_t i = index(r, c);
  grid_[3 * i] = xyz.x();
  grid_[3 * i + 1] = xyz.y();
  grid_[3 * i + 2] = xyz.z();
  mask_[i] = 1;
}

std::size_t SphericalRing::valid_count() const noexcept {
  std::size_t n = 0;
  for (std::uint8_t m : mask_) n += m;
  return n;
}

bool pixel_of(const Eigen::Vector3f& p, const RingParams& params, int& r, int& c) {
  const double x = p.x(), y = p.y(), z = p.z();
  const double range = std::sqrt(x * x + y * y + z * z);
  if (range == 0.0) return false;
  const double col = (std::numbers::pi - std::atan2(y, x)) / params.delta_alpha;
  const double row = params.rows - (std::asin(z / range) / params.delta_beta -
                                    params.beta_down / params.delta_beta);
  const double fc = std::floor(col);
  const double fr = std::floor(row);
  if (!(fc >= 0.0 && fc < params.cols && fr >= 0.0 && fr < params.rows)) return false;
  c = static_cast<int>(fc);
  r = static_cast<int>(fr);
  return true;
}

SphericalRing project(const PointCloud& cloud, const RingParams& params, ProjectStats* stats) {
  params.validate();
  SphericalRing ring(params.rows, params.cols);
  ProjectStats s;
  for (const Eigen::Vector3f& p : cloud.points) {
    int r = 0, c = 0;
    if (!pixel_of(p, params, r, c)) {
      ++s.out_of_range;
      continue;
    }
    if (ring.valid(r, c)) ++s.overwritten;
    ring.set(r, c, p);
    ++s.projected;
  }
  if (stats != nullptr) *stats = s;
  return ring;
}

Eigen::Vector3f unproject(const SphericalRing& ring, int r, int c) {
  if (!ring.in_bounds(r, c) || !ring.valid(r, c)) {
    throw InvalidPixelError("pixel (" + std::to_string(r) + ", " + std::to_string(c) +
                            ") holds no point");
  }
  return ring.at(r, c);
}

PointCloud ring_points(const SphericalRing& ring) {
  PointCloud cloud;
  for (int r = 0; r < ring.rows(); ++r) {
    for (int c = 0; c < ring.cols(); ++c) {
      if (ring.valid(r, c)) cloud.points.push_back(ring.at(r, c));
    }
  }
  return cloud;
}

PointCloud extract_eips(const SphericalRing& ring, std::span<const PixelPoint> seeds, int half) {
  if (half < 0) throw std::invalid_argument("EIP half window must be >= 0");
  std::vector<std::uint8_t> picked(static_cast<std::size_t>(ring.rows()) * ring.cols(), 0);
  for (const PixelPoint& s : seeds) {
    for (int r = s.r - half; r <= s.r + half; ++r) {
      for (int c = s.c - half; c <= s.c + half; ++c) {
        if (ring.in_bounds(r, c) && ring.valid(r, c)) {
          picked[static_cast<std::size_t>(r) * ring.cols() + c] = 1;
        }
      }
    }
  }
  PointCloud eips;
  for (int r = 0; r < ring.rows(); ++r) {
    for (int c = 0; c < ring.cols(); ++c) {
      if (picked[static_cast<std::size_t>(r) * ring.cols() + c]) eips.points.push_back(ring.at(r, c));
    }
  }
  return eips;
}

void write_ring(const SphericalRing& ring, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const std::int32_t header[3] = {ring.rows(), ring.cols(), RingParams::kChannels};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  const auto grid = ring.grid();
  out.write(reinterpret_cast<const char*>(grid.data()),
            static_cast<std::streamsize>(grid.size() * sizeof(float)));
  const auto mask = ring.mask();
  std::vector<std::uint8_t> packed((mask.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

SphericalRing read_ring(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::int32_t header[3];
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header))) {
    throw ParseError(path.string() + ": truncated ring header");
  }
  if (header[0] < 0 || header[1] < 0 || header[2] != RingParams::kChannels) {
    throw ParseError(path.string() + ": bad ring header");
  }
  const int rows = header[0], cols = header[1];
  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  std::vector<float> grid(pixels * 3);
  std::vector<std::uint8_t> packed((pixels + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(grid.data()), static_cast<std::streamsize>(grid.size() * 4)) ||
      !in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()))) {
    throw ParseError(path.string() + ": truncated ring body");
  }
  SphericalRing ring(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      if (packed[i / 8] & (1u << (i % 8))) {
        ring.set(r, c, {grid[3 * i], grid[3 * i + 1], grid[3 * i + 2]});
      }
    }
  }
  return ring;
}

}  // namespace caelo
