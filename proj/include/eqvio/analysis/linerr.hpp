#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace eqvio::analysis {

/// Landmark parametrisations compared by the linearisation study.
enum class Parametrisation { Euclidean, InverseDepth, Polar };

std::string parametrisationName(Parametrisation p);

/// Coordinates of a camera-frame point q.
/// @throws std::domain_error if q is zero, or antipodal to e3 for Polar.
Eigen::VectorXd chart(Parametrisation p, const Eigen::Vector3d& q);
/// Point with the given coordinates.
Eigen::Vector3d chartInverse(Parametrisation p, const Eigen::VectorXd& z);
/// Derivative of chartInverse at z, 3 x dim.
Eigen::MatrixXd chartInverseJacobian(Parametrisation p, const Eigen::VectorXd& z);

/// qdot = -Omega x q - v.
Eigen::Vector3d landmarkVelocity(const Eigen::Vector3d& q, const Eigen::Vector3d& omega,
                                 const Eigen::Vector3d& v);

struct LinErrSetup {
  Eigen::Vector3d qHat{0.0, 0.0, 5.0};
  Eigen::Vector3d omega{0.0, 0.2, 0.0};
  Eigen::Vector3d v{0.0, 0.0, 0.1};
};

/// Residuals of the first-order models of the landmark velocity and bearing.
struct LinErr {
  Eigen::VectorXd eps;
  Eigen::Vector3d dynamics;
  Eigen::Vector3d output;
};

LinErr linearisationError(Parametrisation p, const LinErrSetup& setup, const Eigen::Vector3d& q);

/**
 * @brief Bearing residual of the equivariant output approximation in polar
 * coordinates, y - y_hat - 1/2 (y + y_hat) x omega_eps.
 */
Eigen::Vector3d equivariantOutputError(const LinErrSetup& setup, const Eigen::Vector3d& q);

/// One error-norm field over the (z, theta) grid; NaN marks invalid cells.
struct LinErrField {
  std::string name;
  Eigen::MatrixXd values;  ///< values(i, j) at (z[i], theta[j])
  double max() const;
};

struct LinErrGridSpec {
  int zCells = 200;
  int thetaCells = 200;
  double zMin = 0.1;
  double zMax = 10.0;
  double thetaMax = M_PI / 6.0;
};

struct LinErrGrid {
  LinErrSetup setup;
  std::vector<double> z;
  std::vector<double> theta;
  /// euclidean_f, euclidean_h, inverse_depth_f, inverse_depth_h, polar_f,
  /// polar_h, polar_cstar_h.
  std::vector<LinErrField> fields;
  const LinErrField& field(const std::string& name) const;
};

/// Grid point (z tan(theta), 0, z).
Eigen::Vector3d gridPoint(double z, double theta);

/// Error norms at the cell centres of the (z, theta) domain.
LinErrGrid linearisationGrid(const LinErrSetup& setup, const LinErrGridSpec& spec = {});

/// Which residual a slope is fitted to.
enum class Residual { Dynamics, Output, EquivariantOutput };

/**
 * @brief Least-squares slope of log|mu| against log|eps| along the curve
 * chartInverse(chart(q_hat) + t d).
 *
 * t is log-spaced so that |eps| spans roughly [epsMin, epsMax].
 */
double linearisationSlope(Parametrisation p, Residual r, const LinErrSetup& setup,
                          const Eigen::VectorXd& direction, double epsMin = 1e-3,
                          double epsMax = 1e-1, int samples = 25);

}  // namespace eqvio::analysis
