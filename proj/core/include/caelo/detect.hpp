#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "caelo/nn/cae.hpp"
#include "caelo/nn/tensor.hpp"
#include "caelo/sphering.hpp"

namespace caelo {

struct DetectorParams {
  int h = 2;                  // half size of the neighbor window
  double delta = 0.2;         // minimum score
  double sigma_min = 10.0;    // minimum range of an interest point, meters
  std::size_t n_max = 1024;   // maximum number of interest points
  int eip_half = 7;           // half size of the extended-point window

  void validate() const;
};

/// Rows of the ring fed to the 2D auto-encoder. The network needs sizes
/// divisible by 4, so a 69-row ring loses one row. Row 0 collects returns
/// above the highest beam and is dropped by default.
struct RingCrop {
  int row_offset = 1;
  int rows = 68;
};

/// Per-pixel response vectors, H x W x N.
using ResponseMap = nn::Tensor<float>;

/// Ring coordinates as an H x W x 3 tensor, rows [offset, offset + rows).
nn::Tensor<float> ring_tensor(const SphericalRing& ring, const RingCrop& crop);
/// Mask rows matching ring_tensor.
std::vector<std::uint8_t> ring_mask(const SphericalRing& ring, const RingCrop& crop);

/// Activations of the response layer for every pixel of the cropped ring.
ResponseMap response(const SphericalRing& ring, const nn::CaeNetwork& net, const RingCrop& crop);

struct ScoreMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> scores;       // row-major; 0 where invalid
  std::vector<std::uint8_t> valid;  // row-major

  double score(int r, int c) const { return scores[static_cast<std::size_t>(r) * cols + c]; }
  bool is_valid(int r, int c) const { return valid[static_cast<std::size_t>(r) * cols + c] != 0; }
};

/// Smallest L2 response difference between each valid pixel and its valid
/// neighbors in the (2h+1)^2 window, excluding the pixel itself. Only the
/// band h <= r < H-h, h <= c < W-h is scored. Squared differences are summed
/// in double, channel 0 first.
ScoreMap score_map(const ResponseMap& resp, std::span<const std::uint8_t> mask, int h);

/// Points with score > delta and range >= sigma_min, highest score first
/// (ties by row, then column), at most n_max. `row_offset` maps score-map
/// rows back to ring rows.
std::vector<PixelPoint> select_points(const SphericalRing& ring, const ScoreMap& scores,
                                      const DetectorParams& params, int row_offset = 0);

/// Full detection on one ring.
std::vector<PixelPoint> detect(const SphericalRing& ring, const nn::CaeNetwork& net,
                               const DetectorParams& params, const RingCrop& crop,
                               ScoreMap* scores_out = nullptr);

/// Text grid: "scoremap H W" then one line per row, "-" for invalid pixels.
void write_score_map(const ScoreMap& scores, std::ostream& out);

/// `count` random crops (rows x cols, both divisible by 4) drawn uniformly
/// from the given ring tensors.
std::vector<nn::Tensor<float>> random_crops(std::span<const nn::Tensor<float>> rings, int rows,
                                            int cols, std::size_t count, std::mt19937_64& rng);

}  // namespace caelo
