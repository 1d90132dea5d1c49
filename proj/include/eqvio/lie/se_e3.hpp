#pragma once

#include "eqvio/lie/se3.hpp"

namespace eqvio::lie {

/// Rotation by theta about e3.
Eigen::Matrix3d rotZ(double theta);

/**
 * @brief Yaw-and-translation group S^1 x| R^3, isomorphic to the subgroup of
 * SE(3) whose rotations fix e3.
 */
class SEe3 {
 public:
  SEe3() : x_(Eigen::Vector3d::Zero()) {}
  SEe3(double theta, const Eigen::Vector3d& x);

  static SEe3 identity() { return SEe3(); }
  /// @throws DomainError if the rotation does not fix e3 within 1e-9.
  static SEe3 fromSE3(const SE3& P);

  SEe3 inverse() const;
  SEe3 operator*(const SEe3& other) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return rotZ(theta_) * p + x_; }

  /// Angle wrapped to (-pi, pi].
  double theta() const { return theta_; }
  const Eigen::Vector3d& x() const { return x_; }
  Eigen::Matrix3d rotation() const { return rotZ(theta_); }
  SE3 toSE3() const;

 private:
  double theta_ = 0.0;
  Eigen::Vector3d x_;
};

}  // namespace eqvio::lie
