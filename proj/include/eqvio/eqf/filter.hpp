#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "eqvio/vislam/actions.hpp"
#include "eqvio/vislam/coords.hpp"
#include "eqvio/vislam/group.hpp"

namespace eqvio::eqf {

using vislam::BearingSet;
using vislam::ImuInput;
using vislam::VisGroup;
using vislam::VisState;
using Vector9d = lie::Vector9d;
using Vector6d = lie::Vector6d;

/// Non-finite state, loss of positive definiteness, or a singular innovation covariance.
class FilterDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Gains of the Riccati flow. All entries are variances (or spectral
 * densities per second for the process terms) on the diagonal of the
 * corresponding block, in chart coordinates.
 */
struct GainConfig {
  Vector9d sigma0Nav = (Vector9d() << 1e-4, 1e-4, 1e-4, 1e-4, 1e-4, 1e-4, 1e-3, 1e-3, 1e-3).finished();
  Vector6d sigma0Bias = (Vector6d() << 1e-4, 1e-4, 1e-4, 1e-2, 1e-2, 1e-2).finished();
  Vector6d sigma0Ext = Vector6d::Constant(1e-6);
  Eigen::Vector3d sigma0Landmark{0.01, 0.01, 9.0};

  Vector9d processNav = Vector9d::Constant(1e-6);
  Vector6d processBias = Vector6d::Constant(1e-7);
  Vector6d processExt = Vector6d::Constant(1e-9);
  Eigen::Vector3d processLandmark = Eigen::Vector3d::Constant(1e-6);

  /// Gyroscope then accelerometer noise density squared.
  Vector6d inputNoise = (Vector6d() << 1e-6, 1e-6, 1e-6, 1e-4, 1e-4, 1e-4).finished();
  /// Bearing noise variance on the tangent plane (rad^2).
  double bearingNoise = 4e-6;

  /// Mahalanobis threshold, in standard deviations, on each 2-D bearing residual.
  double outlierGate = 3.0;
  std::size_t maxLandmarks = 50;
  /// Depth given to new landmarks when nothing is tracked yet.
  double defaultDepth = 1.0;
  double gravity = vislam::kGravity;
};

/**
 * Observer state, Riccati matrix and fixed origin. The landmark order of X,
 * origin and the Sigma blocks always agree.
 */
struct FilterState {
  VisGroup X;
  Eigen::MatrixXd Sigma;
  VisState origin;
  double time = 0.0;

  std::vector<int> ids() const { return X.ids(); }
  std::size_t size() const { return X.Q.size(); }
  /// Index of the landmark in the registry, or -1.
  int indexOf(int id) const;
};

/// Filter at the given origin with no landmarks and Sigma from the gains.
FilterState initialize(const VisState& origin, const GainConfig& gains, double time = 0.0);

/// phi(X, origin).
VisState stateEstimate(const FilterState& fs);

/// Linearised error dynamics in chart coordinates.
Eigen::MatrixXd stateMatrix(const FilterState& fs, const ImuInput& u, double gravity);
/// Map from IMU noise (gyro, accel) into chart coordinates.
Eigen::MatrixXd inputMatrix(const FilterState& fs);

/**
 * @brief Equivariant output matrix for the landmarks in y, 2 rows each.
 *
 * Rows use the tangent basis R_Q^T e1, R_Q^T e2 at the predicted bearing.
 */
Eigen::MatrixXd outputMatrix(const FilterState& fs, const BearingSet& y);
/// Tangent-plane residual of each bearing in y against the prediction.
Eigen::VectorXd bearingResidual(const FilterState& fs, const BearingSet& y);

/// Observer step with zero-order-hold input.
FilterState propagate(const FilterState& fs, const ImuInput& u, double dt, const GainConfig& gains);
/// Observer step with input interpolated linearly from u0 to u1.
FilterState propagate(const FilterState& fs, const ImuInput& u0, const ImuInput& u1, double dt,
                      const GainConfig& gains);

struct UpdateReport {
  std::vector<int> used;
  std::vector<int> rejected;
  /// Stacked residuals of the landmarks in `used`.
  Eigen::VectorXd innovation;
};

/// Kalman-style correction; bearings of unknown ids are ignored.
FilterState update(const FilterState& fs, const BearingSet& y, const GainConfig& gains,
                   UpdateReport* report = nullptr);

FilterState addLandmark(const FilterState& fs, int id, const Eigen::Vector3d& bearing, double depth,
                        const GainConfig& gains);
FilterState removeLandmark(const FilterState& fs, int id);
/// Median range of tracked landmarks, or the fallback when none are tracked.
double medianDepth(const FilterState& fs, double fallback);

struct FrameReport {
  UpdateReport update;
  std::vector<int> added;
  std::vector<int> removed;
};

/// Drops lost landmarks, corrects with the tracked ones, then adds new ids.
FilterState processFrame(const FilterState& fs, const BearingSet& y, const GainConfig& gains,
                         FrameReport* report = nullptr);

/// @throws FilterDivergence if X or Sigma contain non-finite values.
void checkFinite(const FilterState& fs);

}  // namespace eqvio::eqf
