#pragma once

#include "eqvio/lie/se_e3.hpp"
#include "eqvio/vislam/group.hpp"
#include "eqvio/vislam/state.hpp"

namespace eqvio::vislam {

// System model.

/// IMU-driven dynamics; biases, extrinsics and landmarks are constant.
VisStateTangent dynamics(const VisState& xi, const ImuInput& u, double gravity = kGravity);

/// Camera-frame bearing of every landmark.
BearingSet measure(const VisState& xi);

// Reference-frame invariance.

/// alpha(S, xi) = (S^-1 P_B, R_S^T v, b, T, S^-1 p_i).
VisState alpha(const lie::SEe3& S, const VisState& xi);
/// Differential of alpha(S, .) applied to a tangent vector.
VisStateTangent alphaTangent(const lie::SEe3& S, const VisStateTangent& d);

// Symmetry actions.

/// phi^B(A, xi_B) = (R_B R_A, x_B + R_B x_A, v_B + R_B v_A).
lie::SE23 phiNav(const lie::SE23& A, const lie::SE23& navState);

/// Right action of the symmetry group on the state.
/// @throws IdMismatchError if the landmark ids do not match.
VisState phi(const VisGroup& X, const VisState& xi);

/// rho(X, y) = (R_Qi^T y_i).
BearingSet rho(const VisGroup& X, const BearingSet& y);

/**
 * @brief Group element taking xi1 to xi2, i.e. phi(X, xi1) = xi2.
 *
 * Each landmark transform is the minimal rotation and scale mapping the
 * camera-frame point of xi1 onto that of xi2.
 */
VisGroup transporter(const VisState& xi1, const VisState& xi2);

/// Smallest rotation R with R a = b for unit vectors a and b.
lie::SO3 minimalRotation(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

/// SOT(3) element Q with Q^-1 q1 = q2.
lie::SOT3 landmarkTransporter(const Eigen::Vector3d& q1, const Eigen::Vector3d& q2);

// Lift.

/**
 * @brief Lift of the dynamics into the symmetry algebra (length 21 + 4n).
 *
 * The navigation component is (Omega - b^Omega, R_B^T v, a - b^a + g R_B^T e3),
 * which is what the lift condition requires with nonzero bias and gravity.
 */
Eigen::VectorXd lift(const VisState& xi, const ImuInput& u, double gravity = kGravity);

/// Landmark component of the lift for a camera-frame point q and camera twist.
Eigen::Vector4d landmarkLift(const Eigen::Vector3d& q, const Eigen::Vector3d& omegaC,
                             const Eigen::Vector3d& vC);

// Single-landmark model in the camera frame.

/// q_dot = -Omega_C x q - v_C.
Eigen::Vector3d landmarkDynamics(const Eigen::Vector3d& q, const Eigen::Vector3d& omegaC,
                                 const Eigen::Vector3d& vC);
/// q / |q|.
Eigen::Vector3d landmarkMeasure(const Eigen::Vector3d& q);
/// c_Q^-1 R_Q^T q.
Eigen::Vector3d landmarkPhi(const lie::SOT3& Q, const Eigen::Vector3d& q);
/// R_Q^T y.
Eigen::Vector3d landmarkRho(const lie::SOT3& Q, const Eigen::Vector3d& y);

}  // namespace eqvio::vislam
