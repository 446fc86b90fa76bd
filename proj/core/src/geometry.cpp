#include "caelo/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "caelo/error.hpp"

namespace caelo {

namespace {

double orthonormal_drift(const Eigen::Matrix3d& r) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
}

Eigen::Matrix3d normalized_rotation(const Eigen::Matrix3d& r) {
  if (orthonormal_drift(r) > Pose::kOrthonormalTolerance) {
    return nearest_rotation(r);
  }
  return r;
}

}  // namespace

Pose::Pose()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

Pose::Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw std::invalid_argument("pose has non-finite entries");
  }
  if (rotation.determinant() <= 0.0) {
    throw std::invalid_argument("rotation matrix must have positive determinant");
  }
  rotation_ = normalized_rotation(rotation);
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
  return Pose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Pose Pose::translation_only(const Eigen::Vector3d& t) {
  return Pose(Eigen::Matrix3d::Identity(), t);
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Pose compose(const Pose& a, const Pose& b) {
  return Pose(a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation());
}

Pose inverse(const Pose& a) {
  Eigen::Matrix3d rt = a.rotation().transpose();
  return Pose(rt, -(rt * a.translation()));
}

Pose accumulate(std::span<const Pose> relatives, std::size_t first, std::size_t last) {
  if (first > last || last >= relatives.size()) {
    throw std::out_of_range("accumulate: index range [" + std::to_string(first) + ", " +
                            std::to_string(last) + "] invalid for " +
                            std::to_string(relatives.size()) + " poses");
  }
  Pose acc = relatives[first];
  for (std::size_t i = first + 1; i <= last; ++i) {
    acc = compose(acc, relatives[i]);
  }
  return acc;
}

Eigen::Matrix3d rot_x(double a) {
  Eigen::Matrix3d r;
  const double c = std::cos(a), s = std::sin(a);
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Eigen::Matrix3d rot_y(double a) {
  Eigen::Matrix3d r;
  const double c = std::cos(a), s = std::sin(a);
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Eigen::Matrix3d rot_z(double a) {
  Eigen::Matrix3d r;
  const double c = std::cos(a), s = std::sin(a);
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

EulerXYZ r2eulers(const Eigen::Matrix3d& r) {
  const double s = r(0, 2);
  if (std::abs(s) > 1.0 - 1e-9) {
    throw GimbalLockError("XYZ Euler decomposition undefined: pitch at +-90 degrees");
  }
  EulerXYZ e;
  e.ry = std::asin(s);
  e.rx = std::atan2(-r(1, 2), r(2, 2));
  e.rz = std::atan2(-r(0, 1), r(0, 0));
  return e;
}

Eigen::Matrix3d eulers2r(const EulerXYZ& e) { return rot_x(e.rx) * rot_y(e.ry) * rot_z(e.rz); }

Pose fractional_pose(const Pose& delta, double fraction) {
  if (fraction == 0.0) return Pose::identity();
  const EulerXYZ e = r2eulers(delta.rotation());
  const EulerXYZ scaled{fraction * e.rx, fraction * e.ry, fraction * e.rz};
  return Pose(eulers2r(scaled), fraction * delta.translation());
}

Pose fractional_pose_axis_angle(const Pose& delta, double fraction) {
  if (fraction == 0.0) return Pose::identity();
  Eigen::AngleAxisd aa(delta.rotation());
  Eigen::AngleAxisd scaled(fraction * aa.angle(), aa.axis());
  return Pose(scaled.toRotationMatrix(), fraction * delta.translation());
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

double rotation_angle(const Eigen::Matrix3d& r) {
  // atan2 form keeps precision for small and near-pi angles.
  const Eigen::Vector3d axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double sin_part = 0.5 * axis.norm();
  const double cos_part = 0.5 * (r.trace() - 1.0);
  return std::atan2(sin_part, cos_part);
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace caelo
