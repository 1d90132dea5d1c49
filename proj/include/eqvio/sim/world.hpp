#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "eqvio/lie/se3.hpp"
#include "eqvio/lie/se_e3.hpp"
#include "eqvio/sim/trajectory.hpp"
#include "eqvio/vislam/state.hpp"

namespace eqvio::sim {

struct NoiseSpec {
  /// White-noise densities (rad/s/sqrt(Hz), m/s^2/sqrt(Hz)).
  double gyroDensity = 0.0;
  double accelDensity = 0.0;
  Eigen::Vector3d gyroBias = Eigen::Vector3d::Zero();
  Eigen::Vector3d accelBias = Eigen::Vector3d::Zero();
  /// Tangent-plane bearing noise (rad).
  double bearingSigma = 0.0;
  std::uint64_t seed = 0;
};

/// Camera looking along the body y axis with image y along body z.
lie::SE3 defaultExtrinsics();

struct WorldSpec {
  TrajectorySpec trajectory;
  NoiseSpec noise;
  std::size_t numLandmarks = 20;
  Eigen::Vector3d boxMin{-1.5, -1.5, -3.0};
  Eigen::Vector3d boxMax{1.5, 1.5, 0.0};
  /// Half-angle of the visibility cone about the camera z axis (rad).
  double fovHalfAngle = M_PI / 4;
  lie::SE3 extrinsics = defaultExtrinsics();
  /// Reference-frame change applied to the truth before synthesising measurements.
  std::optional<lie::SEe3> frame;
  double gravity = vislam::kGravity;
};

/// @throws std::invalid_argument for an invalid trajectory, box or noise setting.
void validate(const WorldSpec& spec);

struct SimSample {
  double t = 0.0;
  vislam::VisState truth;
  vislam::ImuInput imu;
  /// Present on camera frames only.
  std::optional<vislam::BearingSet> bearings;
};

/// True if q lies strictly in front of the camera and inside the cone.
bool inFieldOfView(const Eigen::Vector3d& q, double halfAngle);

/// Geodesic perturbation of a unit bearing by a tangent vector of the given components.
Eigen::Vector3d perturbBearing(const Eigen::Vector3d& y, double n1, double n2);

/**
 * @brief Samples at the IMU rate, duration * imuRate of them, with bearings
 * on every (imuRate / frameRate)-th sample.
 *
 * All randomness is drawn from one generator seeded by noise.seed.
 */
std::vector<SimSample> generateWorld(const WorldSpec& spec);

/// Ideal (noise-free, bias-free) IMU reading for a trajectory point.
vislam::ImuInput idealImu(const TrajectoryPoint& p, double gravity);

}  // namespace eqvio::sim
