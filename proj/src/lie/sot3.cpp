#include "eqvio/lie/sot3.hpp"

#include <cmath>

namespace eqvio::lie {

SOT3::SOT3(const SO3& R, double c) : R_(R), c_(c) {
  if (!(c > 0.0)) throw std::invalid_argument("SOT3: scale must be positive");
}

SOT3 SOT3::fromMatrix(const Eigen::Matrix4d& M) {
  return SOT3(SO3::fromMatrix(M.topLeftCorner<3, 3>()), M(3, 3));
}

SOT3 SOT3::exp(const Algebra& u) { return SOT3(SO3::exp(u.head<3>()), std::exp(u(3))); }

Eigen::Matrix4d SOT3::wedge(const Algebra& u) {
  Eigen::Matrix4d U = Eigen::Matrix4d::Zero();
  U.topLeftCorner<3, 3>() = skew(u.head<3>());
  U(3, 3) = u(3);
  return U;
}

SOT3::Algebra SOT3::vee(const Eigen::Matrix4d& U) {
  Algebra u;
  u << unskew(U.topLeftCorner<3, 3>()), U(3, 3);
  return u;
}

SOT3::Algebra SOT3::log() const {
  Algebra u;
  u << R_.log(), std::log(c_);
  return u;
}

SOT3 SOT3::inverse() const { return SOT3(R_.inverse(), 1.0 / c_); }

SOT3 SOT3::operator*(const SOT3& other) const { return SOT3(R_ * other.R_, c_ * other.c_); }

Eigen::Matrix4d SOT3::matrix() const {
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  M.topLeftCorner<3, 3>() = R_.matrix();
  M(3, 3) = c_;
  return M;
}

Eigen::Matrix4d SOT3::Adjoint() const {
  Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
  M.topLeftCorner<3, 3>() = R_.matrix();
  return M;
}

}  // namespace eqvio::lie
