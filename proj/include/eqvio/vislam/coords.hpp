#pragma once

#include <Eigen/Core>

#include "eqvio/vislam/state.hpp"

namespace eqvio::vislam {

/// Landmark parametrisations.
enum class Param { Euclidean, InverseDepth, Polar };

const char* paramName(Param p);

/// Rotation components of a polar chart are this far from the antipode of e3 at most.
inline constexpr double kPolarAntipodeTol = 1e-7;
/// Chart neighbourhood: every rotation in the chart stays this far from angle pi.
inline constexpr double kChartMargin = 0.1;

Eigen::Vector3d paramEuclidean(const Eigen::Vector3d& q);
Eigen::Vector3d paramEuclideanInverse(const Eigen::Vector3d& z);

/// (q/|q|, 1/|q|).
Eigen::Vector4d paramInverseDepth(const Eigen::Vector3d& q);
Eigen::Vector3d paramInverseDepthInverse(const Eigen::Vector4d& z);
Eigen::Matrix<double, 3, 4> paramInverseDepthInverseJacobian(const Eigen::Vector4d& z);

/**
 * @brief Polar parametrisation (-acos(e3.q/|q|) (e3 x q)/|e3 x q|, -log|q|).
 *
 * The rotation part is zero for q along +e3.
 * @throws ExceptionSetError for q near zero, ChartError for q near -e3.
 */
Eigen::Vector4d paramPolar(const Eigen::Vector3d& q);
/// exp_SOT3(z)^-1 e3.
Eigen::Vector3d paramPolarInverse(const Eigen::Vector4d& z);
Eigen::Matrix<double, 3, 4> paramPolarInverseJacobian(const Eigen::Vector4d& z);

/// Dimension-generic wrappers; z has 3 or 4 entries depending on p.
Eigen::VectorXd paramForward(Param p, const Eigen::Vector3d& q);
Eigen::Vector3d paramInverse(Param p, const Eigen::VectorXd& z);
Eigen::MatrixXd paramInverseJacobian(Param p, const Eigen::VectorXd& z);

/// Polar coordinates with the always-zero third rotation entry dropped: (w1, w2, s).
Eigen::Vector3d polarChart(const Eigen::Vector3d& q);
Eigen::Vector3d polarChartInverse(const Eigen::Vector3d& z);

inline int chartDim(std::size_t n) { return 21 + 3 * static_cast<int>(n); }

/// Offsets into the chart vector.
inline constexpr int kChartNav = 0;
inline constexpr int kChartBias = 9;
inline constexpr int kChartExt = 15;
inline constexpr int kChartLandmarks = 21;

/**
 * @brief Normal coordinates about an origin configuration (length 21 + 3n).
 *
 * Layout: SE_2(3) log of the navigation error, bias difference, SE(3) log of
 * the camera-pose error, then polar coordinates of each camera-frame landmark.
 * @throws ChartError outside the chart neighbourhood.
 */
Eigen::VectorXd localCoords(const VisState& xi, const VisState& origin);
/// Inverse of localCoords(); landmark ids are taken from the origin.
VisState localCoordsInverse(const Eigen::VectorXd& eps, const VisState& origin);

/**
 * @brief Differential at the identity of X -> localCoords(phi(X, origin)).
 *
 * Shape (21 + 3n) x (21 + 4n). Its rows are orthonormal, so the transpose is
 * also the pseudoinverse.
 */
Eigen::MatrixXd originActionDifferential(std::size_t n);

}  // namespace eqvio::vislam
