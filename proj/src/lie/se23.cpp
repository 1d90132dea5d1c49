#include "eqvio/lie/se23.hpp"

namespace eqvio::lie {

SE23 SE23::fromMatrix(const Matrix5d& M) {
  return SE23(SO3::fromMatrix(M.topLeftCorner<3, 3>()), M.block<3, 1>(0, 3), M.block<3, 1>(0, 4));
}

SE23 SE23::exp(const Algebra& u) {
  const Eigen::Vector3d w = u.head<3>();
  const Eigen::Matrix3d J = so3LeftJacobian(w);
  return SE23(SO3::exp(w), J * u.segment<3>(3), J * u.tail<3>());
}

Matrix5d SE23::wedge(const Algebra& u) {
  Matrix5d U = Matrix5d::Zero();
  U.topLeftCorner<3, 3>() = skew(u.head<3>());
  U.block<3, 1>(0, 3) = u.segment<3>(3);
  U.block<3, 1>(0, 4) = u.tail<3>();
  return U;
}

SE23::Algebra SE23::vee(const Matrix5d& U) {
  Algebra u;
  u << unskew(U.topLeftCorner<3, 3>()), U.block<3, 1>(0, 3), U.block<3, 1>(0, 4);
  return u;
}

SE23::Algebra SE23::log() const {
  const Eigen::Vector3d w = R_.log();
  const Eigen::Matrix3d Jinv = so3LeftJacobianInverse(w);
  Algebra u;
  u << w, Jinv * x_, Jinv * v_;
  return u;
}

SE23 SE23::inverse() const {
  const SO3 Rinv = R_.inverse();
  return SE23(Rinv, -(Rinv * x_), -(Rinv * v_));
}

SE23 SE23::operator*(const SE23& other) const {
  return SE23(R_ * other.R_, x_ + R_ * other.x_, v_ + R_ * other.v_);
}

Matrix5d SE23::matrix() const {
  Matrix5d M = Matrix5d::Identity();
  M.topLeftCorner<3, 3>() = R_.matrix();
  M.block<3, 1>(0, 3) = x_;
  M.block<3, 1>(0, 4) = v_;
  return M;
}

Matrix9d SE23::Adjoint() const {
  Matrix9d out = Matrix9d::Zero();
  const Eigen::Matrix3d& R = R_.matrix();
  out.block<3, 3>(0, 0) = R;
  out.block<3, 3>(3, 3) = R;
  out.block<3, 3>(6, 6) = R;
  out.block<3, 3>(3, 0) = skew(x_) * R;
  out.block<3, 3>(6, 0) = skew(v_) * R;
  return out;
}

}  // namespace eqvio::lie
