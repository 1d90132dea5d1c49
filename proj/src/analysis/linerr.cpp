#include "eqvio/analysis/linerr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eqvio/lie/so3.hpp"

namespace eqvio::analysis {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vector3d polarRotation(const Vector3d& bearing) {
  const Vector3d n = Vector3d::UnitZ().cross(bearing);
  const double s = n.norm();
  const double theta = std::atan2(s, bearing.z());
  if (s < 1e-12) {
    if (bearing.z() < 0.0) throw std::domain_error("polar chart undefined opposite e3");
    return Vector3d::Zero();
  }
  return -theta / s * n;
}

Vector3d bearingJacobianApply(const Vector3d& qHat, const Vector3d& dq) {
  const double r = qHat.norm();
  const Vector3d y = qHat / r;
  return (dq - y * y.dot(dq)) / r;
}

}  // namespace

std::string parametrisationName(Parametrisation p) {
  switch (p) {
    case Parametrisation::Euclidean:
      return "euclidean";
    case Parametrisation::InverseDepth:
      return "inverse_depth";
    case Parametrisation::Polar:
      return "polar";
  }
  return "";
}

VectorXd chart(Parametrisation p, const Vector3d& q) {
  const double r = q.norm();
  if (r <= 0.0) throw std::domain_error("landmark at the camera centre");
  switch (p) {
    case Parametrisation::Euclidean:
      return q;
    case Parametrisation::InverseDepth: {
      VectorXd z(4);
      z << q / r, 1.0 / r;
      return z;
    }
    case Parametrisation::Polar: {
      VectorXd z(4);
      z << polarRotation(q / r), -std::log(r);
      return z;
    }
  }
  throw std::invalid_argument("unknown parametrisation");
}

Vector3d chartInverse(Parametrisation p, const VectorXd& z) {
  switch (p) {
    case Parametrisation::Euclidean:
      return z.head<3>();
    case Parametrisation::InverseDepth:
      return z.head<3>() / z(3);
    case Parametrisation::Polar:
      return std::exp(-z(3)) * (lie::SO3::exp(-z.head<3>()).matrix() * Vector3d::UnitZ());
  }
  throw std::invalid_argument("unknown parametrisation");
}

MatrixXd chartInverseJacobian(Parametrisation p, const VectorXd& z) {
  switch (p) {
    case Parametrisation::Euclidean:
      return Matrix3d::Identity();
    case Parametrisation::InverseDepth: {
      MatrixXd J(3, 4);
      J << Matrix3d::Identity() / z(3), -z.head<3>() / (z(3) * z(3));
      return J;
    }
    case Parametrisation::Polar: {
      const Vector3d w = z.head<3>();
      MatrixXd J(3, 4);
      J.leftCols<3>() = std::exp(-z(3)) * lie::SO3::exp(-w).matrix() * lie::skew(Vector3d::UnitZ()) *
                        lie::so3LeftJacobian(w);
      J.col(3) = -chartInverse(p, z);
      return J;
    }
  }
  throw std::invalid_argument("unknown parametrisation");
}

Vector3d landmarkVelocity(const Vector3d& q, const Vector3d& omega, const Vector3d& v) {
  return -omega.cross(q) - v;
}

LinErr linearisationError(Parametrisation p, const LinErrSetup& setup, const Vector3d& q) {
  const VectorXd zHat = chart(p, setup.qHat);
  LinErr out;
  out.eps = chart(p, q) - zHat;
  const Vector3d dq = chartInverseJacobian(p, zHat) * out.eps;
  out.dynamics = landmarkVelocity(q, setup.omega, setup.v) -
                 landmarkVelocity(setup.qHat, setup.omega, setup.v) + setup.omega.cross(dq);
  out.output = q.normalized() - setup.qHat.normalized() - bearingJacobianApply(setup.qHat, dq);
  return out;
}

Vector3d equivariantOutputError(const LinErrSetup& setup, const Vector3d& q) {
  const Vector3d y = q.normalized();
  const Vector3d yHat = setup.qHat.normalized();
  const VectorXd eps = chart(Parametrisation::Polar, q) - chart(Parametrisation::Polar, setup.qHat);
  return y - yHat - 0.5 * (y + yHat).cross(eps.head<3>());
}

double LinErrField::max() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values.data()[i];
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return m;
}

const LinErrField& LinErrGrid::field(const std::string& name) const {
  for (const auto& f : fields) {
    if (f.name == name) return f;
  }
  throw std::out_of_range("no linearisation field named " + name);
}

Vector3d gridPoint(double z, double theta) { return {z * std::tan(theta), 0.0, z}; }

LinErrGrid linearisationGrid(const LinErrSetup& setup, const LinErrGridSpec& spec) {
  if (spec.zCells < 1 || spec.thetaCells < 1) throw std::invalid_argument("empty grid");
  LinErrGrid grid;
  grid.setup = setup;
  const double dz = (spec.zMax - spec.zMin) / spec.zCells;
  const double dth = 2.0 * spec.thetaMax / spec.thetaCells;
  for (int i = 0; i < spec.zCells; ++i) grid.z.push_back(spec.zMin + (i + 0.5) * dz);
  for (int j = 0; j < spec.thetaCells; ++j) grid.theta.push_back(-spec.thetaMax + (j + 0.5) * dth);

  const Parametrisation params[] = {Parametrisation::Euclidean, Parametrisation::InverseDepth,
                                    Parametrisation::Polar};
  for (Parametrisation p : params) {
    LinErrField f{parametrisationName(p) + "_f", MatrixXd::Constant(spec.zCells, spec.thetaCells, kNaN)};
    LinErrField h{parametrisationName(p) + "_h", f.values};
    for (int i = 0; i < spec.zCells; ++i) {
      for (int j = 0; j < spec.thetaCells; ++j) {
        try {
          const LinErr e = linearisationError(p, setup, gridPoint(grid.z[i], grid.theta[j]));
          f.values(i, j) = e.dynamics.norm();
          h.values(i, j) = e.output.norm();
        } catch (const std::domain_error&) {
        }
      }
    }
    grid.fields.push_back(std::move(f));
    grid.fields.push_back(std::move(h));
  }
  LinErrField c{"polar_cstar_h", MatrixXd::Constant(spec.zCells, spec.thetaCells, kNaN)};
  for (int i = 0; i < spec.zCells; ++i) {
    for (int j = 0; j < spec.thetaCells; ++j) {
      try {
        c.values(i, j) = equivariantOutputError(setup, gridPoint(grid.z[i], grid.theta[j])).norm();
      } catch (const std::domain_error&) {
      }
    }
  }
  grid.fields.push_back(std::move(c));
  return grid;
}

double linearisationSlope(Parametrisation p, Residual r, const LinErrSetup& setup,
                          const VectorXd& direction, double epsMin, double epsMax, int samples) {
  if (samples < 2 || !(epsMin > 0.0) || !(epsMax > epsMin)) {
    throw std::invalid_argument("invalid slope range");
  }
  if (r == Residual::EquivariantOutput && p != Parametrisation::Polar) {
    throw std::invalid_argument("equivariant output approximation needs polar coordinates");
  }
  const VectorXd zHat = chart(p, setup.qHat);
  const VectorXd d = direction.normalized();
  Eigen::VectorXd xs(samples), ys(samples);
  for (int k = 0; k < samples; ++k) {
    const double t = epsMin * std::pow(epsMax / epsMin, static_cast<double>(k) / (samples - 1));
    const Vector3d q = chartInverse(p, zHat + t * d);
    const LinErr e = linearisationError(p, setup, q);
    double mu = 0.0;
    switch (r) {
      case Residual::Dynamics:
        mu = e.dynamics.norm();
        break;
      case Residual::Output:
        mu = e.output.norm();
        break;
      case Residual::EquivariantOutput:
        mu = equivariantOutputError(setup, q).norm();
        break;
    }
    xs(k) = std::log(e.eps.norm());
    ys(k) = std::log(mu);
  }
  const double mx = xs.mean();
  const double my = ys.mean();
  return ((xs.array() - mx) * (ys.array() - my)).sum() / (xs.array() - mx).square().sum();
}

}  // namespace eqvio::analysis
