#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>

namespace eqvio::lie {

/// Thrown when a logarithm is requested on or near the cut locus.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Below this rotation angle exp/log switch to Taylor expansions.
inline constexpr double kSmallAngle = 1e-6;
/// log refuses rotations whose angle is within this distance of pi.
inline constexpr double kCutLocusTol = 1e-6;
/// Compositions allowed before a rotation is projected back onto SO(3).
inline constexpr int kReorthoPeriod = 100;
/// Orthogonality drift that forces an immediate projection.
inline constexpr double kReorthoDrift = 1e-7;

/// @brief Matrix w^x such that (w^x) v = w x v.
Eigen::Matrix3d skew(const Eigen::Vector3d& w);
/// @brief Inverse of skew(); reads the antisymmetric part.
Eigen::Vector3d unskew(const Eigen::Matrix3d& W);

/// @brief Left Jacobian of SO(3), J_l(w) = sum_k (w^x)^k / (k+1)!.
Eigen::Matrix3d so3LeftJacobian(const Eigen::Vector3d& w);
/// @brief Inverse of so3LeftJacobian().
Eigen::Matrix3d so3LeftJacobianInverse(const Eigen::Vector3d& w);

/// @brief x / |x|.
/// @throws DomainError if |x| <= 1e-12.
Eigen::Vector3d sphereProject(const Eigen::Vector3d& x);

/// @brief Nearest rotation matrix in the Frobenius sense.
Eigen::Matrix3d projectToRotation(const Eigen::Matrix3d& M);

/**
 * @brief Special orthogonal group SO(3).
 *
 * Stored as a 3x3 matrix. Composition counts are tracked so that long
 * products are projected back onto the group periodically.
 */
class SO3 {
 public:
  static constexpr int kDim = 3;
  using Algebra = Eigen::Vector3d;

  SO3() : R_(Eigen::Matrix3d::Identity()) {}
  /// Wraps an (assumed orthogonal) matrix without modification.
  explicit SO3(const Eigen::Matrix3d& R) : R_(R) {}

  static SO3 identity() { return SO3(); }
  /// Projects an arbitrary matrix onto SO(3).
  static SO3 fromMatrix(const Eigen::Matrix3d& M) { return SO3(projectToRotation(M)); }
  /// Hamilton quaternion, any norm.
  static SO3 fromQuaternion(const Eigen::Quaterniond& q);
  static SO3 exp(const Algebra& w);
  static Eigen::Matrix3d wedge(const Algebra& w) { return skew(w); }
  static Algebra vee(const Eigen::Matrix3d& W) { return unskew(W); }

  /// @throws DomainError if the rotation angle is within kCutLocusTol of pi.
  Algebra log() const;
  double angle() const;

  SO3 inverse() const;
  SO3 operator*(const SO3& other) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return R_ * p; }

  const Eigen::Matrix3d& matrix() const { return R_; }
  Eigen::Matrix3d Adjoint() const { return R_; }
  /// Hamilton convention with non-negative scalar part.
  Eigen::Quaterniond quaternion() const;

 private:
  Eigen::Matrix3d R_;
  int compositions_ = 0;
};

}  // namespace eqvio::lie
