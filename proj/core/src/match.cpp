#include "caelo/match.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "caelo/error.hpp"
#include "caelo/parallel.hpp"

namespace caelo {

namespace {

double squared_distance(const Feature& x, const Feature& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < kFeatureSize; ++k) {
    const double d = static_cast<double>(x[k]) - static_cast<double>(y[k]);
    s += d * d;
  }
  return s;
}

// Index of the nearest element of `to` for every element of `from`.
std::vector<std::size_t> nearest(std::span<const Feature> from, std::span<const Feature> to,
                                 std::vector<double>& dist, int threads) {
  std::vector<std::size_t> idx(from.size());
  dist.assign(from.size(), 0.0);
  parallel_for(from.size(), threads, [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < to.size(); ++j) {
      const double d = squared_distance(from[i], to[j]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    idx[i] = arg;
    dist[i] = best;
  });
  return idx;
}

}  // namespace

std::vector<MatchPair> nn_match(std::span<const Feature> a, std::span<const Feature> b, int threads) {
  std::vector<MatchPair> out;
  if (a.empty() || b.empty()) return out;
  std::vector<double> da, db;
  const auto ab = nearest(a, b, da, threads);
  const auto ba = nearest(b, a, db, threads);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ba[ab[i]] == i) out.push_back({i, ab[i], std::sqrt(da[i])});
  }
  return out;
}

Pose kabsch(std::span<const Eigen::Vector3d> a, std::span<const Eigen::Vector3d> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kabsch: point sets differ in size");
  if (a.size() < 3) throw std::invalid_argument("kabsch: need at least 3 correspondences");
  const double n = static_cast<double>(a.size());
  Eigen::Vector3d ca = Eigen::Vector3d::Zero(), cb = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
  }
  ca /= n;
  cb /= n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < a.size(); ++i) h += (b[i] - cb) * (a[i] - ca).transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  if (!(s(0) > 0.0) || s(1) <= 1e-10 * s(0)) {
    throw DegenerateError("kabsch: correspondences are collinear or coincident");
  }
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Eigen::Matrix3d r = v * d * u.transpose();
  return Pose(r, ca - r * cb);
}

void RansacParams::validate() const {
  if (!(inlier_threshold > 0.0)) throw std::invalid_argument("RANSAC inlier threshold must be > 0");
  if (min_iterations < 1 || max_iterations < min_iterations) {
    throw std::invalid_argument("RANSAC iterations must satisfy 0 < min <= max");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("RANSAC confidence must be in (0, 1)");
}

int adaptive_iterations(double w, const RansacParams& params) {
  const double w3 = w * w * w;
  if (w3 >= 1.0) return params.min_iterations;
  if (w3 <= 0.0) return params.max_iterations;
  const double n = std::ceil(std::log(1.0 - params.confidence) / std::log(1.0 - w3));
  if (!(n < static_cast<double>(params.max_iterations))) return params.max_iterations;
  return std::max(params.min_iterations, static_cast<int>(n));
}

namespace {

std::vector<MatchPair> inliers_under(const Pose& pose, std::span<const Eigen::Vector3d> pa,
                                     std::span<const Eigen::Vector3d> pb, std::span<const MatchPair> pairs,
                                     double threshold) {
  std::vector<MatchPair> out;
  for (const MatchPair& p : pairs) {
    if ((pa[p.a] - pose * pb[p.b]).norm() < threshold) out.push_back(p);
  }
  return out;
}

Pose fit(std::span<const Eigen::Vector3d> pa, std::span<const Eigen::Vector3d> pb,
         std::span<const MatchPair> pairs) {
  std::vector<Eigen::Vector3d> a, b;
  a.reserve(pairs.size());
  b.reserve(pairs.size());
  for (const MatchPair& p : pairs) {
    a.push_back(pa[p.a]);
    b.push_back(pb[p.b]);
  }
  return kabsch(a, b);
}

}  // namespace

MatchResult ransac_pose(std::span<const Eigen::Vector3d> points_a,
                        std::span<const Eigen::Vector3d> points_b, std::span<const MatchPair> pairs,
                        const RansacParams& params) {
  params.validate();
  if (pairs.size() < 3) throw std::invalid_argument("RANSAC needs at least 3 candidate pairs");
  for (const MatchPair& p : pairs) {
    if (p.a >= points_a.size() || p.b >= points_b.size()) throw std::out_of_range("match pair index");
  }

  std::mt19937_64 rng(params.seed);
  const std::uint64_t n = pairs.size();
  std::size_t best_count = 0;
  Pose best_pose;
  bool have_model = false;
  int needed = params.max_iterations;
  int it = 0;
  while (it < needed) {
    ++it;
    std::uint64_t s[3];
    s[0] = rng() % n;
    do s[1] = rng() % n; while (s[1] == s[0]);
    do s[2] = rng() % n; while (s[2] == s[0] || s[2] == s[1]);
    const MatchPair sample[3] = {pairs[s[0]], pairs[s[1]], pairs[s[2]]};
    Pose model;
    try {
      model = fit(points_a, points_b, sample);
    } catch (const DegenerateError&) {
      continue;
    }
    std::size_t count = 0;
    for (const MatchPair& p : pairs) {
      count += (points_a[p.a] - model * points_b[p.b]).norm() < params.inlier_threshold;
    }
    if (!have_model || count > best_count) {
      best_count = count;
      best_pose = model;
      have_model = true;
      needed = adaptive_iterations(static_cast<double>(count) / static_cast<double>(n), params);
    }
  }
  if (!have_model) throw NoModelError("RANSAC: every sample was degenerate");

  MatchResult result;
  result.iterations = it;
  result.pose = best_pose;
  result.inliers = inliers_under(best_pose, points_a, points_b, pairs, params.inlier_threshold);
  if (result.inliers.size() >= 3) {
    try {
      const Pose refit = fit(points_a, points_b, result.inliers);
      auto refit_inliers = inliers_under(refit, points_a, points_b, pairs, params.inlier_threshold);
      if (refit_inliers.size() >= result.inliers.size()) {
        result.pose = refit;
        result.inliers = std::move(refit_inliers);
      }
    } catch (const DegenerateError&) {
    }
  }
  result.inlier_ratio = static_cast<double>(result.inliers.size()) / static_cast<double>(n);
  return result;
}

void write_match_result(const MatchResult& result, std::ostream& out) {
  const Eigen::Matrix4d m = result.pose.matrix();
  out << "pose";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) out << ' ' << format_real(m(r, c));
  }
  out << "\niterations " << result.iterations << "\ninlier_ratio " << format_real(result.inlier_ratio)
      << "\ninliers " << result.inliers.size() << '\n';
  for (const MatchPair& p : result.inliers) out << p.a << ' ' << p.b << '\n';
}

}  // namespace caelo
