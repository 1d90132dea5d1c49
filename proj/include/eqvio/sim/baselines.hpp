#pragma once

#include <Eigen/Core>
#include <vector>

#include "eqvio/lie/se23.hpp"
#include "eqvio/sim/particles.hpp"

namespace eqvio::sim {

/// Estimate and covariance of a filter at each snapshot time.
struct CovarianceTrack {
  std::vector<double> times;
  std::vector<lie::SE23> estimate;
  std::vector<Eigen::MatrixXd> sigma;
};

/// (q - q_hat, x - x_hat, v - v_hat) with the sign of q chosen nearest q_hat.
Eigen::VectorXd ekfCoords(const lie::SE23& estimate, const lie::SE23& truth);
lie::SE23 ekfCoordsInverse(const lie::SE23& estimate, const Eigen::VectorXd& eps);

/// (log(R R_hat^T), x - x_hat, v - v_hat).
Eigen::VectorXd mekfCoords(const lie::SE23& estimate, const lie::SE23& truth);
lie::SE23 mekfCoordsInverse(const lie::SE23& estimate, const Eigen::VectorXd& eps);

/// Quaternion-state EKF: 10-D error, first-order covariance flow.
CovarianceTrack ekfPropagate(const ParticleSpec& spec);
/// Multiplicative EKF: 9-D error with world-frame attitude log.
CovarianceTrack mekfPropagate(const ParticleSpec& spec);

}  // namespace eqvio::sim
