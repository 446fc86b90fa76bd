#include "caelo/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "caelo/error.hpp"

namespace caelo {

void DetectorParams::validate() const {
  if (h < 1) throw std::invalid_argument("detector h must be >= 1");
  if (eip_half < 0) throw std::invalid_argument("EIP half size must be >= 0");
  if (n_max < 1) throw std::invalid_argument("detector n_max must be >= 1");
  if (!(sigma_min >= 0.0)) throw std::invalid_argument("detector sigma_min must be >= 0");
}

namespace {

void check_crop(const SphericalRing& ring, const RingCrop& crop) {
  if (crop.row_offset < 0 || crop.rows < 1 || crop.row_offset + crop.rows > ring.rows()) {
    throw ShapeError("ring crop rows [" + std::to_string(crop.row_offset) + ", " +
                     std::to_string(crop.row_offset + crop.rows) + ") exceed ring height " +
                     std::to_string(ring.rows()));
  }
}

}  // namespace

nn::Tensor<float> ring_tensor(const SphericalRing& ring, const RingCrop& crop) {
  check_crop(ring, crop);
  const std::size_t row_len = static_cast<std::size_t>(ring.cols()) * 3;
  nn::Tensor<float> t({crop.rows, ring.cols(), 3});
  const auto grid = ring.grid();
  std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(crop.row_offset * row_len),
              static_cast<std::size_t>(crop.rows) * row_len, t.data());
  return t;
}

std::vector<std::uint8_t> ring_mask(const SphericalRing& ring, const RingCrop& crop) {
  check_crop(ring, crop);
  const auto mask = ring.mask();
  const auto begin = mask.begin() + static_cast<std::ptrdiff_t>(crop.row_offset) * ring.cols();
  return {begin, begin + static_cast<std::ptrdiff_t>(crop.rows) * ring.cols()};
}

ResponseMap response(const SphericalRing& ring, const nn::CaeNetwork& net, const RingCrop& crop) {
  return net.net.forward_to(ring_tensor(ring, crop), net.feature_layer);
}

ScoreMap score_map(const ResponseMap& resp, std::span<const std::uint8_t> mask, int h) {
  if (resp.rank() != 3) throw ShapeError("response map must be H x W x N");
  if (h < 1) throw std::invalid_argument("score window half size must be >= 1");
  const int rows = resp.dim(0), cols = resp.dim(1), n = resp.dim(2);
  if (mask.size() != static_cast<std::size_t>(rows) * cols) throw ShapeError("mask size mismatch");

  ScoreMap out;
  out.rows = rows;
  out.cols = cols;
  out.scores.assign(mask.size(), 0.0);
  out.valid.assign(mask.size(), 0);
  const float* R = resp.data();
  for (int r = h; r < rows - h; ++r) {
    for (int c = h; c < cols - h; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      if (!mask[i]) continue;
      const float* a = R + i * n;
      double best = std::numeric_limits<double>::infinity();
      bool any = false;
      for (int u = -h; u <= h; ++u) {
        for (int v = -h; v <= h; ++v) {
          if (u == 0 && v == 0) continue;
          const std::size_t j = static_cast<std::size_t>(r + u) * cols + (c + v);
          if (!mask[j]) continue;
          const float* b = R + j * n;
          double sum = 0.0;
          for (int k = 0; k < n; ++k) {
            const double d = static_cast<double>(a[k]) - static_cast<double>(b[k]);
            sum += d * d;
          }
          const double dist = std::sqrt(sum);
          if (dist < best) best = dist;
          any = true;
        }
      }
      if (any) {
        out.scores[i] = best;
        out.valid[i] = 1;
      }
    }
  }
  return out;
}

std::vector<PixelPoint> select_points(const SphericalRing& ring, const ScoreMap& scores,
                                      const DetectorParams& params, int row_offset) {
  params.validate();
  struct Candidate {
    double score;
    int r;
    int c;
  };
  std::vector<Candidate> candidates;
  const double sigma2 = params.sigma_min * params.sigma_min;
  for (int r = 0; r < scores.rows; ++r) {
    for (int c = 0; c < scores.cols; ++c) {
      if (!scores.is_valid(r, c)) continue;
      const double s = scores.score(r, c);
      if (!(s > params.delta)) continue;
      const int rr = r + row_offset;
      if (!ring.in_bounds(rr, c) || !ring.valid(rr, c)) continue;
      if (ring.at(rr, c).cast<double>().squaredNorm() < sigma2) continue;
      candidates.push_back({s, rr, c});
    }
  }
  const auto better = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.r != b.r) return a.r < b.r;
    return a.c < b.c;
  };
  const std::size_t keep = std::min(params.n_max, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), better);
  std::vector<PixelPoint> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({candidates[i].r, candidates[i].c, ring.at(candidates[i].r, candidates[i].c)});
  }
  return out;
}

std::vector<PixelPoint> detect(const SphericalRing& ring, const nn::CaeNetwork& net,
                               const DetectorParams& params, const RingCrop& crop,
                               ScoreMap* scores_out) {
  ScoreMap scores = score_map(response(ring, net, crop), ring_mask(ring, crop), params.h);
  auto points = select_points(ring, scores, params, crop.row_offset);
  if (scores_out) *scores_out = std::move(scores);
  return points;
}

void write_score_map(const ScoreMap& scores, std::ostream& out) {
  out << "scoremap " << scores.rows << ' ' << scores.cols << '\n';
  char buf[32];
  for (int r = 0; r < scores.rows; ++r) {
    for (int c = 0; c < scores.cols; ++c) {
      if (c) out << ' ';
      if (scores.is_valid(r, c)) {
        std::snprintf(buf, sizeof(buf), "%.6g", scores.score(r, c));
        out << buf;
      } else {
        out << '-';
      }
    }
    out << '\n';
  }
}

std::vector<nn::Tensor<float>> random_crops(std::span<const nn::Tensor<float>> rings, int rows,
                                            int cols, std::size_t count, std::mt19937_64& rng) {
  if (rings.empty()) throw std::invalid_argument("no rings to crop from");
  if (rows < 4 || cols < 4 || rows % 4 || cols % 4) {
    throw std::invalid_argument("crop sizes must be positive multiples of 4");
  }
  std::vector<nn::Tensor<float>> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const nn::Tensor<float>& src = rings[rng() % rings.size()];
    const int H = src.dim(0), W = src.dim(1), C = src.dim(2);
    if (rows > H || cols > W) throw ShapeError("crop larger than ring");
    const int r0 = static_cast<int>(rng() % static_cast<std::uint64_t>(H - rows + 1));
    const int c0 = static_cast<int>(rng() % static_cast<std::uint64_t>(W - cols + 1));
    nn::Tensor<float> t({rows, cols, C});
    for (int r = 0; r < rows; ++r) {
      const float* s = src.data() + (static_cast<std::size_t>(r0 + r) * W + c0) * C;
      std::copy_n(s, static_cast<std::size_t>(cols) * C, t.data() + static_cast<std::size_t>(r) * cols * C);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace caelo
