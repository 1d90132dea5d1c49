#pragma once

#include "eqvio/lie/so3.hpp"

namespace eqvio::lie {

using Vector9d = Eigen::Matrix<double, 9, 1>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;

/**
 * @brief Extended special Euclidean group SE_2(3), A = (R, x, v).
 *
 * The homogeneous form is the 5x5 matrix [[R, x, v], [0, 1, 0], [0, 0, 1]].
 * Algebra coordinates are ordered (rotation, translation, velocity).
 */
class SE23 {
 public:
  static constexpr int kDim = 9;
  using Algebra = Vector9d;

  SE23() : x_(Eigen::Vector3d::Zero()), v_(Eigen::Vector3d::Zero()) {}
  SE23(const SO3& R, const Eigen::Vector3d& x, const Eigen::Vector3d& v) : R_(R), x_(x), v_(v) {}

  static SE23 identity() { return SE23(); }
  static SE23 fromMatrix(const Matrix5d& M);
  static SE23 exp(const Algebra& u);
  static Matrix5d wedge(const Algebra& u);
  static Algebra vee(const Matrix5d& U);

  Algebra log() const;
  SE23 inverse() const;
  SE23 operator*(const SE23& other) const;

  const SO3& R() const { return R_; }
  const Eigen::Vector3d& x() const { return x_; }
  const Eigen::Vector3d& v() const { return v_; }
  Matrix5d matrix() const;
  Matrix9d Adjoint() const;

 private:
  SO3 R_;
  Eigen::Vector3d x_;
  Eigen::Vector3d v_;
};

}  // namespace eqvio::lie
