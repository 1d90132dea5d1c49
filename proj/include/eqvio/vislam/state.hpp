#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "eqvio/lie/se23.hpp"
#include "eqvio/lie/se3.hpp"

namespace eqvio::vislam {

using lie::Vector6d;

inline constexpr double kGravity = 9.81;
/// A camera-frame landmark closer than this to the camera centre is in the exception set.
inline constexpr double kExceptionTol = 1e-9;

class ExceptionSetError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ChartError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IdMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Body-frame gyroscope and accelerometer readings.
struct ImuInput {
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();
};

struct Landmark {
  int id = 0;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
};

/// Unit bearing in the camera frame.
struct Bearing {
  int id = 0;
  Eigen::Vector3d y = Eigen::Vector3d::UnitZ();
};
using BearingSet = std::vector<Bearing>;

/**
 * @brief Full VI-SLAM state: body pose and velocity, IMU bias, camera
 * extrinsics, and inertial-frame landmarks.
 *
 * bias stacks the gyroscope bias over the accelerometer bias.
 */
struct VisState {
  lie::SE3 pose;
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Vector6d bias = Vector6d::Zero();
  lie::SE3 extrinsics;
  std::vector<Landmark> landmarks;

  /// Navigation state (R, x, v) as an element of SE_2(3).
  lie::SE23 nav() const { return lie::SE23(pose.R(), pose.x(), velocity); }
  void setNav(const lie::SE23& n);
  lie::SE3 cameraPose() const { return pose * extrinsics; }
  /// Landmark i expressed in the camera frame.
  Eigen::Vector3d cameraLandmark(std::size_t i) const;
  std::vector<int> ids() const;
  std::size_t size() const { return landmarks.size(); }
};

/**
 * @brief Time derivative of a VisState in ambient coordinates.
 *
 * Rotational parts are full 3x3 matrix derivatives, not body rates.
 */
struct VisStateTangent {
  Eigen::Matrix3d dR = Eigen::Matrix3d::Zero();
  Eigen::Vector3d dx = Eigen::Vector3d::Zero();
  Eigen::Vector3d dv = Eigen::Vector3d::Zero();
  Vector6d db = Vector6d::Zero();
  Eigen::Matrix3d dRT = Eigen::Matrix3d::Zero();
  Eigen::Vector3d dxT = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> dp;

  /// Layout matches embedState().
  Eigen::VectorXd flatten() const;
};

/// Ambient coordinates (R, x, v, b, R_T, x_T, p_1..p_n), length 33 + 3n.
Eigen::VectorXd embedState(const VisState& xi);

/// @throws ExceptionSetError if any camera-frame landmark is at the camera centre,
/// IdMismatchError if landmark ids repeat.
void checkValid(const VisState& xi);

/**
 * @brief Origin configuration: the given navigation, bias and extrinsic
 * values with every landmark placed at P T e3.
 */
VisState makeOrigin(const lie::SE3& pose, const Eigen::Vector3d& velocity, const Vector6d& bias,
                    const lie::SE3& extrinsics, const std::vector<int>& ids);

/// Same origin with its landmark list replaced to match ids.
VisState withOriginLandmarks(const VisState& origin, const std::vector<int>& ids);

}  // namespace eqvio::vislam
