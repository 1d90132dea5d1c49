#pragma once

#include "eqvio/lie/so3.hpp"

namespace eqvio::lie {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/**
 * @brief Special Euclidean group SE(3), P = (R, x), acting as P p = R p + x.
 *
 * Algebra coordinates are ordered (rotation, translation).
 */
class SE3 {
 public:
  static constexpr int kDim = 6;
  using Algebra = Vector6d;

  SE3() : x_(Eigen::Vector3d::Zero()) {}
  SE3(const SO3& R, const Eigen::Vector3d& x) : R_(R), x_(x) {}

  static SE3 identity() { return SE3(); }
  /// Reads a 4x4 homogeneous matrix; the rotation block is projected onto SO(3).
  static SE3 fromMatrix(const Eigen::Matrix4d& M);
  static SE3 exp(const Algebra& u);
  static Eigen::Matrix4d wedge(const Algebra& u);
  static Algebra vee(const Eigen::Matrix4d& U);
  /// Algebra adjoint ad_u, so that ad_u v = [u, v].
  static Matrix6d ad(const Algebra& u);

  Algebra log() const;
  SE3 inverse() const;
  SE3 operator*(const SE3& other) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return R_ * p + x_; }

  const SO3& R() const { return R_; }
  const Eigen::Vector3d& x() const { return x_; }
  Eigen::Matrix4d matrix() const;
  Matrix6d Adjoint() const;

 private:
  SO3 R_;
  Eigen::Vector3d x_;
};

}  // namespace eqvio::lie
