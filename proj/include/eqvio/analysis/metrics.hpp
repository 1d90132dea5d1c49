#pragma once

#include <Eigen/Core>
#include <vector>

#include "eqvio/lie/se23.hpp"
#include "eqvio/lie/se_e3.hpp"

namespace eqvio::analysis {

/// Timestamped navigation states (attitude, position, velocity).
struct NavTrajectory {
  std::vector<double> t;
  std::vector<lie::SE23> nav;

  std::size_t size() const { return t.size(); }
  std::vector<Eigen::Vector3d> positions() const;
};

struct AlignmentResult {
  /// Transform with S * p_estimate closest to p_truth.
  lie::SEe3 S;
  std::vector<double> errors;
  double rmse = 0.0;
};

/**
 * @brief Closed-form yaw and translation least-squares alignment of estimated
 * positions onto true positions.
 * @throws std::invalid_argument on unequal lengths or fewer than 2 samples.
 */
AlignmentResult alignSEe3(const std::vector<Eigen::Vector3d>& estimate,
                          const std::vector<Eigen::Vector3d>& truth);

/// Per-sample body-frame velocity error and gravity-direction error.
struct DriftSeries {
  std::vector<double> t;
  std::vector<double> velocityError;  ///< |R_hat^T v_hat - R^T v|
  std::vector<double> gravityError;   ///< angle between R_hat^T e3 and R^T e3, rad
};

/// @throws std::invalid_argument on unequal lengths.
DriftSeries driftMetrics(const NavTrajectory& estimate, const NavTrajectory& truth);

struct DriftSummary {
  double tailVelocity = 0.0;  ///< max over the tail, m/s
  double tailGravity = 0.0;   ///< max over the tail, rad
};

/// Maxima over the final tailFraction of the samples.
DriftSummary summarizeDrift(const DriftSeries& d, double tailFraction = 0.5);

/// One-sided test of an increasing trend on block means.
struct TrendResult {
  double slope = 0.0;
  double standardError = 0.0;
  double tStatistic = 0.0;
  double critical = 0.0;
  /// tStatistic exceeds the critical value: the series grows.
  bool growing = false;
};

/**
 * @brief Splits the series into equal blocks, fits an ordinary least-squares
 * line to block mean against block mean time and compares the slope
 * t-statistic with the Student-t quantile at the given confidence.
 * @throws std::invalid_argument if there are fewer samples than blocks or
 * fewer than 3 blocks.
 */
TrendResult trendTest(const std::vector<double>& t, const std::vector<double>& values, int blocks = 10,
                      double confidence = 0.95);

/// Tail slice [first index, end) of a series for the given fraction.
std::size_t tailStart(std::size_t n, double tailFraction);

}  // namespace eqvio::analysis
