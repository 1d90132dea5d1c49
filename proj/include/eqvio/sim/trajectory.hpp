#pragma once

#include <Eigen/Core>
#include <string>

#include "eqvio/lie/se_e3.hpp"
#include "eqvio/lie/so3.hpp"

namespace eqvio::sim {

enum class TrajectoryKind { Circle, FigureEight, ConstantTwist };

const char* trajectoryName(TrajectoryKind kind);
/// @throws std::invalid_argument for an unknown name.
TrajectoryKind trajectoryFromName(const std::string& name);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Circle;
  double radius = 3.0;
  double period = 20.0;
  /// Height above the inertial origin; the inertial z axis points down.
  double altitude = 1.5;
  /// Roll and pitch oscillation amplitude (rad).
  double excitation = 0.1;
  /// Vertical oscillation amplitude (m).
  double heave = 0.2;
  double duration = 60.0;
  double imuRate = 200.0;
  double frameRate = 20.0;
};

/// @throws std::invalid_argument for non-positive rates, duration, radius or period.
void validate(const TrajectorySpec& spec);

/// Body pose and its derivatives at one instant.
struct TrajectoryPoint {
  lie::SO3 R;
  /// Body-frame angular velocity.
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  /// Inertial-frame acceleration.
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
};

TrajectoryPoint evaluate(const TrajectorySpec& spec, double t);

/// The same motion seen from the reference frame changed by S.
TrajectoryPoint transform(const lie::SEe3& S, const TrajectoryPoint& p);

/// R = Rz(yaw) Ry(pitch) Rx(roll).
lie::SO3 eulerToRotation(double roll, double pitch, double yaw);
/// Body rate from Euler angles and their rates for the same convention.
Eigen::Vector3d eulerRatesToBody(const Eigen::Vector3d& rpy, const Eigen::Vector3d& rpyRate);

}  // namespace eqvio::sim
