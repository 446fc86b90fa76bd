#include "caelo/icp.hpp"

#include <cmath>
#include <stdexcept>

#include "caelo/error.hpp"
#include "caelo/kdtree.hpp"
#include "caelo/match.hpp"

namespace caelo {

void IcpParams::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("ICP max_iterations must be >= 1");
  if (!(initial_threshold > 0.0)) throw std::invalid_argument("ICP initial threshold must be > 0");
  if (!(decay > 0.0 && decay < 1.0)) throw std::invalid_argument("ICP decay must be in (0, 1)");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("ICP epsilon must be >= 0");
}

double IcpParams::threshold(int iteration) const {
  return initial_threshold * std::pow(decay, iteration);
}

namespace {

std::vector<Eigen::Vector3d> to_double(const PointCloud& cloud) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points) out.push_back(p.cast<double>());
  return out;
}

double rms(const Pose& pose, const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - pose * b[i]).squaredNorm();
  return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace

IcpResult icp_refine(const PointCloud& a, const PointCloud& b, const Pose& initial,
                     const IcpParams& params) {
  params.validate();
  if (a.empty() || b.empty()) throw std::invalid_argument("ICP needs two non-empty clouds");
  const KdTree tree(to_double(a));
  const std::vector<Eigen::Vector3d> pb = to_double(b);

  IcpResult result;
  result.pose = initial;
  std::vector<Eigen::Vector3d> ka, kb;
  for (int it = 0; it < params.max_iterations; ++it) {
    const double thr = params.threshold(it);
    const double thr2 = thr * thr;
    std::vector<Eigen::Vector3d> na, nb;
    for (const auto& q : pb) {
      const auto hit = tree.nearest(result.pose * q);
      if (hit.squared_distance < thr2) {
        na.push_back(tree.point(hit.index));
        nb.push_back(q);
      }
    }
    if (na.size() < 3) {
      result.warning = true;
      break;
    }
    Pose next;
    try {
      next = kabsch(na, nb);
    } catch (const DegenerateError&) {
      result.warning = true;
      break;
    }
    ka = std::move(na);
    kb = std::move(nb);
    const Pose step = inverse(result.pose) * next;
    result.pose = next;
    result.iterations = it + 1;
    if (step.translation().norm() + rotation_angle(step.rotation()) < params.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.correspondences = ka.size();
  result.initial_rms = rms(initial, ka, kb);
  result.final_rms = rms(result.pose, ka, kb);
  return result;
}

}  // namespace caelo
