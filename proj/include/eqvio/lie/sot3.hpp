#pragma once

#include "eqvio/lie/so3.hpp"

namespace eqvio::lie {

/**
 * @brief Scaled orthogonal transforms SOT(3), Q = (R, c) with c > 0.
 *
 * Acts on points as Q p = c R p. The homogeneous form is diag(R, c) and the
 * algebra coordinates are ordered (rotation, log-scale).
 */
class SOT3 {
 public:
  static constexpr int kDim = 4;
  using Algebra = Eigen::Vector4d;

  SOT3() = default;
  /// @throws std::invalid_argument if c is not strictly positive.
  SOT3(const SO3& R, double c);

  static SOT3 identity() { return SOT3(); }
  static SOT3 fromMatrix(const Eigen::Matrix4d& M);
  static SOT3 exp(const Algebra& u);
  static Eigen::Matrix4d wedge(const Algebra& u);
  static Algebra vee(const Eigen::Matrix4d& U);

  Algebra log() const;
  SOT3 inverse() const;
  SOT3 operator*(const SOT3& other) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return c_ * (R_ * p); }

  const SO3& R() const { return R_; }
  double c() const { return c_; }
  Eigen::Matrix4d matrix() const;
  Eigen::Matrix4d Adjoint() const;

 private:
  SO3 R_;
  double c_ = 1.0;
};

}  // namespace eqvio::lie
