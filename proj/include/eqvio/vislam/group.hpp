#pragma once

#include <Eigen/Core>
#include <vector>

#include "eqvio/lie/se23.hpp"
#include "eqvio/lie/se3.hpp"
#include "eqvio/lie/sot3.hpp"
#include "eqvio/vislam/state.hpp"

namespace eqvio::vislam {

struct LandmarkTransform {
  int id = 0;
  lie::SOT3 Q;
};

/// Offsets into the algebra vector of the symmetry group.
inline constexpr int kAlgA = 0;
inline constexpr int kAlgBeta = 9;
inline constexpr int kAlgB = 15;
inline constexpr int kAlgQ = 21;
inline int algebraDim(std::size_t n) { return 21 + 4 * static_cast<int>(n); }

/**
 * @brief Element X = (A, beta, B, Q_1..Q_n) of SE_2(3) x R^6 x SE(3) x SOT(3)^n.
 *
 * Landmark transforms carry ids; products and actions require matching id
 * order. Algebra vectors are laid out as [A 9 | beta 6 | B 6 | Q_i 4 each].
 */
struct VisGroup {
  lie::SE23 A;
  Vector6d beta = Vector6d::Zero();
  lie::SE3 B;
  std::vector<LandmarkTransform> Q;

  static VisGroup identity(const std::vector<int>& ids);
  static VisGroup exp(const Eigen::VectorXd& u, const std::vector<int>& ids);
  /// Block-diagonal matrix form of an algebra vector; beta appears as a 7x7 translation block.
  static Eigen::MatrixXd wedge(const Eigen::VectorXd& u);
  static Eigen::VectorXd vee(const Eigen::MatrixXd& U);

  Eigen::VectorXd log() const;
  VisGroup inverse() const;
  /// @throws IdMismatchError if the landmark ids differ.
  VisGroup operator*(const VisGroup& other) const;
  /// Block-diagonal homogeneous matrix.
  Eigen::MatrixXd matrix() const;
  Eigen::MatrixXd Adjoint() const;

  std::vector<int> ids() const;
  std::size_t size() const { return Q.size(); }
};

}  // namespace eqvio::vislam
