#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "eqvio/lie/se23.hpp"
#include "eqvio/vislam/state.hpp"

namespace eqvio::sim {

/// Initial covariance and constant input of the navigation distribution experiment.
lie::Matrix9d defaultParticleSigma0();
vislam::ImuInput defaultParticleInput();

struct ParticleSpec {
  lie::Matrix9d sigma0 = defaultParticleSigma0();
  vislam::ImuInput input = defaultParticleInput();
  double horizon = 15.0;
  double step = 5.0;
  /// RK4 steps per snapshot interval.
  int substeps = 100;
  std::size_t count = 2000;
  std::uint64_t seed = 0;
  double gravity = vislam::kGravity;
};

/// Snapshot times 0, step, 2 step, ..., horizon.
std::vector<double> snapshotTimes(const ParticleSpec& spec);

struct ParticleCloud {
  std::vector<double> times;
  /// Trajectory started at the identity.
  std::vector<lie::SE23> nominal;
  /// particles[k][i] is particle i at times[k].
  std::vector<std::vector<lie::SE23>> particles;
};

/// Classical RK4 of the bias-free navigation dynamics with constant input.
lie::SE23 integrateNav(const lie::SE23& start, const vislam::ImuInput& u, double duration, int steps,
                       double gravity);

/// Symmetric square root L with L L^T = S for positive semi-definite S.
Eigen::MatrixXd covarianceSqrt(const Eigen::MatrixXd& S);

/**
 * @brief Particles started at exp(eta) with eta ~ N(0, sigma0), each
 * integrated independently.
 *
 * Particle i draws from its own generator seeded by (seed, i), so the cloud
 * does not depend on evaluation order.
 */
ParticleCloud sampleParticles(const ParticleSpec& spec);

}  // namespace eqvio::sim
