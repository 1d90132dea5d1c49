#include "eqvio/lie/se3.hpp"

namespace eqvio::lie {

SE3 SE3::fromMatrix(const Eigen::Matrix4d& M) {
  return SE3(SO3::fromMatrix(M.topLeftCorner<3, 3>()), M.topRightCorner<3, 1>());
}

SE3 SE3::exp(const Algebra& u) {
  const Eigen::Vector3d w = u.head<3>();
  return SE3(SO3::exp(w), so3LeftJacobian(w) * u.tail<3>());
}

Eigen::Matrix4d SE3::wedge(const Algebra& u) {
  Eigen::Matrix4d U = Eigen::Matrix4d::Zero();
  U.topLeftCorner<3, 3>() = skew(u.head<3>());
  U.topRightCorner<3, 1>() = u.tail<3>();
  return U;
}

SE3::Algebra SE3::vee(const Eigen::Matrix4d& U) {
  Algebra u;
  u << unskew(U.topLeftCorner<3, 3>()), U.topRightCorner<3, 1>();
  return u;
}

Matrix6d SE3::ad(const Algebra& u) {
  Matrix6d out = Matrix6d::Zero();
  const Eigen::Matrix3d W = skew(u.head<3>());
  out.topLeftCorner<3, 3>() = W;
  out.bottomRightCorner<3, 3>() = W;
  out.bottomLeftCorner<3, 3>() = skew(u.tail<3>());
  return out;
}

SE3::Algebra SE3::log() const {
  const Eigen::Vector3d w = R_.log();
  Algebra u;
  u << w, so3LeftJacobianInverse(w) * x_;
  return u;
}

SE3 SE3::inverse() const {
  const SO3 Rinv = R_.inverse();
  return SE3(Rinv, -(Rinv * x_));
}

SE3 SE3::operator*(const SE3& other) const {
  return SE3(R_ * other.R_, x_ + R_ * other.x_);
}

Eigen::Matrix4d SE3::matrix() const {
  Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
  M.topLeftCorner<3, 3>() = R_.matrix();
  M.topRightCorner<3, 1>() = x_;
  return M;
}

Matrix6d SE3::Adjoint() const {
  Matrix6d out = Matrix6d::Zero();
  const Eigen::Matrix3d& R = R_.matrix();
  out.topLeftCorner<3, 3>() = R;
  out.bottomRightCorner<3, 3>() = R;
  out.bottomLeftCorner<3, 3>() = skew(x_) * R;
  return out;
}

}  // namespace eqvio::lie
