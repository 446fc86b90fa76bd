#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

namespace caelo {

/// Rigid transform x -> R x + t. The rotation is kept orthonormal with
/// det +1; construction re-projects onto SO(3) when the Frobenius drift
/// of R^T R from identity exceeds kOrthonormalTolerance.
class Pose {
 public:
  static constexpr double kOrthonormalTolerance = 1e-9;

  Pose();
  /// Throws std::invalid_argument if `rotation` is not finite or has
  /// negative determinant.
  Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static Pose identity() { return Pose(); }
  static Pose from_matrix(const Eigen::Matrix4d& m);
  static Pose translation_only(const Eigen::Vector3d& t);

  const Eigen::Matrix3d& rotation() const noexcept { return rotation_; }
  const Eigen::Vector3d& translation() const noexcept { return translation_; }
  Eigen::Matrix4d matrix() const;

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// a * b: applies b first, then a.
Pose compose(const Pose& a, const Pose& b);
inline Pose operator*(const Pose& a, const Pose& b) { return compose(a, b); }

Pose inverse(const Pose& a);

/// Ordered product relatives[first] * ... * relatives[last] (inclusive).
/// Throws std::out_of_range when first > last or last is past the end.
Pose accumulate(std::span<const Pose> relatives, std::size_t first, std::size_t last);

/// Angles of R = Rx(rx) * Ry(ry) * Rz(rz), radians.
struct EulerXYZ {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;
};

/// Throws GimbalLockError when |R(0,2)| > 1 - 1e-9.
EulerXYZ r2eulers(const Eigen::Matrix3d& r);
Eigen::Matrix3d eulers2r(const EulerXYZ& e);

Eigen::Matrix3d rot_x(double angle);
Eigen::Matrix3d rot_y(double angle);
Eigen::Matrix3d rot_z(double angle);

/// Scales the Euler angles and translation of `delta` by `fraction`.
/// Throws GimbalLockError when delta's pitch is at the singularity.
Pose fractional_pose(const Pose& delta, double fraction);

/// Same endpoints as fractional_pose, but interpolates the rotation along
/// its axis. Used where the Euler form is singular.
Pose fractional_pose_axis_angle(const Pose& delta, double fraction);

/// Closest rotation in the Frobenius sense (SVD projection).
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);

/// Rotation angle in radians, in [0, pi].
double rotation_angle(const Eigen::Matrix3d& r);

double deg2rad(double deg);
double rad2deg(double rad);

}  // namespace caelo
