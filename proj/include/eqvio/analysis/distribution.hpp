#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "eqvio/sim/particles.hpp"

namespace eqvio::analysis {

/// Navigation-error coordinates whose covariance a filter tracks.
enum class ErrorCoordinates { EqF, EKF, MEKF };

std::string coordinatesName(ErrorCoordinates c);

/// log(truth * estimate^-1), the EqF normal coordinates about the identity origin.
Eigen::VectorXd eqfCoords(const lie::SE23& estimate, const lie::SE23& truth);
lie::SE23 eqfCoordsInverse(const lie::SE23& estimate, const Eigen::VectorXd& eps);

/**
 * @brief Mardia multivariate skewness of the rows of a sample.
 *
 * statistic = n b1 / 6 is compared with the chi-square quantile with
 * d (d + 1) (d + 2) / 6 degrees of freedom.
 */
struct SkewnessTest {
  double b1 = 0.0;
  double statistic = 0.0;
  double bound = 0.0;
  bool gaussian = false;
};

SkewnessTest mardiaSkewness(const Eigen::MatrixXd& samples, double confidence = 0.99);

/// Agreement of the true cloud with one filter at one time.
struct DistributionRow {
  ErrorCoordinates filter = ErrorCoordinates::EqF;
  double time = 0.0;
  /// |sample covariance - filter covariance|_F / |filter covariance|_F.
  double covarianceError = 0.0;
  /// Mahalanobis norm of the sample mean under the filter covariance.
  double meanDiscrepancy = 0.0;
  SkewnessTest skewness;
  /// covarianceError within the tolerance and the skewness test passed.
  bool consistent = false;
};

/// Positions of a cloud drawn from a filter's Gaussian, or of the truth particles.
struct PositionCloud {
  std::string source;
  double time = 0.0;
  std::vector<Eigen::Vector3d> positions;
};

struct DistributionReport {
  std::vector<DistributionRow> rows;
  std::vector<PositionCloud> clouds;

  const DistributionRow& row(ErrorCoordinates c, double time) const;
};

struct DistributionSpec {
  sim::ParticleSpec particles;
  double covarianceTolerance = 0.15;
  double skewnessConfidence = 0.99;
  /// Matrix-exponential steps per snapshot interval for the EqF covariance.
  int eqfSubsteps = 200;
};

/// EqF covariance of the navigation error at each snapshot time.
std::vector<Eigen::MatrixXd> eqfCovarianceTrack(const sim::ParticleSpec& spec,
                                                const std::vector<lie::SE23>& nominal, int substeps);

/**
 * @brief Propagates a particle cloud and the EqF, EKF and MEKF navigation
 * distributions and compares them at every snapshot time.
 */
DistributionReport distributionCompare(const DistributionSpec& spec);

}  // namespace eqvio::analysis
