#include "eqvio/vislam/coords.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eqvio/lie/se23.hpp"
#include "eqvio/lie/so3.hpp"
#include "eqvio/vislam/group.hpp"

namespace eqvio::vislam {

using Eigen::Vector3d;
using Eigen::Vector4d;

const char* paramName(Param p) {
  switch (p) {
    case Param::Euclidean: return "euclidean";
    case Param::InverseDepth: return "inverse_depth";
    case Param::Polar: return "polar";
  }
  return "unknown";
}

namespace {
void requireNonzero(const Vector3d& q) {
  if (q.norm() <= kExceptionTol) throw ExceptionSetError("landmark at the camera centre");
}
}  // namespace

Vector3d paramEuclidean(const Vector3d& q) { return q; }
Vector3d paramEuclideanInverse(const Vector3d& z) { return z; }

Vector4d paramInverseDepth(const Vector3d& q) {
  requireNonzero(q);
  const double n = q.norm();
  Vector4d z;
  z << q / n, 1.0 / n;
  return z;
}

Vector3d paramInverseDepthInverse(const Vector4d& z) { return z.head<3>() / z(3); }

Eigen::Matrix<double, 3, 4> paramInverseDepthInverseJacobian(const Vector4d& z) {
  Eigen::Matrix<double, 3, 4> J;
  J.leftCols<3>() = Eigen::Matrix3d::Identity() / z(3);
  J.col(3) = -z.head<3>() / (z(3) * z(3));
  return J;
}

Vector4d paramPolar(const Vector3d& q) {
  requireNonzero(q);
  const double n = q.norm();
  const Vector3d y = q / n;
  const Vector3d e3xq = Vector3d::UnitZ().cross(y);
  const double s = e3xq.norm();
  const double theta = std::atan2(s, y.z());
  if (M_PI - theta < kPolarAntipodeTol) {
    throw ChartError("polar parametrisation undefined near -e3");
  }
  const double factor = s < 1e-12 ? 1.0 : theta / s;
  Vector4d z;
  z << -factor * e3xq, -std::log(n);
  return z;
}

Vector3d paramPolarInverse(const Vector4d& z) {
  const lie::SO3 R = lie::SO3::exp(-z.head<3>());
  return std::exp(-z(3)) * (R * Vector3d::UnitZ());
}

Eigen::Matrix<double, 3, 4> paramPolarInverseJacobian(const Vector4d& z) {
  const Vector3d w = z.head<3>();
  const double scale = std::exp(-z(3));
  const Eigen::Matrix3d R = lie::SO3::exp(-w).matrix();
  Eigen::Matrix<double, 3, 4> J;
  J.leftCols<3>() = scale * R * lie::skew(Vector3d::UnitZ()) * lie::so3LeftJacobian(w);
  J.col(3) = -scale * R.col(2);
  return J;
}

Eigen::VectorXd paramForward(Param p, const Vector3d& q) {
  switch (p) {
    case Param::Euclidean: return paramEuclidean(q);
    case Param::InverseDepth: return paramInverseDepth(q);
    case Param::Polar: return paramPolar(q);
  }
  throw std::invalid_argument("unknown parametrisation");
}

Vector3d paramInverse(Param p, const Eigen::VectorXd& z) {
  switch (p) {
    case Param::Euclidean: return paramEuclideanInverse(z.head<3>());
    case Param::InverseDepth: return paramInverseDepthInverse(z.head<4>());
    case Param::Polar: return paramPolarInverse(z.head<4>());
  }
  throw std::invalid_argument("unknown parametrisation");
}

Eigen::MatrixXd paramInverseJacobian(Param p, const Eigen::VectorXd& z) {
  switch (p) {
    case Param::Euclidean: return Eigen::Matrix3d::Identity();
    case Param::InverseDepth: return paramInverseDepthInverseJacobian(z.head<4>());
    case Param::Polar: return paramPolarInverseJacobian(z.head<4>());
  }
  throw std::invalid_argument("unknown parametrisation");
}

Vector3d polarChart(const Vector3d& q) {
  const Vector4d z = paramPolar(q);
  return Vector3d(z(0), z(1), z(3));
}

Vector3d polarChartInverse(const Vector3d& z) {
  return paramPolarInverse(Vector4d(z(0), z(1), 0.0, z(2)));
}

namespace {
void checkChartAngle(double angle, const char* what) {
  if (angle > M_PI - kChartMargin) {
    throw ChartError(std::string("state outside the chart neighbourhood: ") + what);
  }
}
}  // namespace

Eigen::VectorXd localCoords(const VisState& xi, const VisState& origin) {
  const std::size_t n = xi.landmarks.size();
  if (origin.landmarks.size() != n) throw IdMismatchError("localCoords: landmark count mismatch");
  Eigen::VectorXd eps(chartDim(n));

  const lie::SE23 navErr = origin.nav().inverse() * xi.nav();
  checkChartAngle(navErr.R().angle(), "attitude");
  eps.segment<9>(kChartNav) = navErr.log();
  eps.segment<6>(kChartBias) = xi.bias - origin.bias;

  const lie::SE3 cam = xi.cameraPose();
  const lie::SE3 camErr = origin.cameraPose().inverse() * cam;
  checkChartAngle(camErr.R().angle(), "camera attitude");
  eps.segment<6>(kChartExt) = camErr.log();

  const lie::SE3 camInv = cam.inverse();
  for (std::size_t i = 0; i < n; ++i) {
    if (xi.landmarks[i].id != origin.landmarks[i].id) {
      throw IdMismatchError("localCoords: landmark id mismatch");
    }
    const Vector3d q = camInv * xi.landmarks[i].p;
    requireNonzero(q);
    checkChartAngle(std::acos(std::clamp(q.z() / q.norm(), -1.0, 1.0)), "landmark bearing");
    eps.segment<3>(kChartLandmarks + 3 * i) = polarChart(q);
  }
  return eps;
}

VisState localCoordsInverse(const Eigen::VectorXd& eps, const VisState& origin) {
  const std::size_t n = origin.landmarks.size();
  if (eps.size() != chartDim(n)) throw IdMismatchError("localCoordsInverse: dimension mismatch");
  VisState xi;
  xi.setNav(origin.nav() * lie::SE23::exp(eps.segment<9>(kChartNav)));
  xi.bias = origin.bias + eps.segment<6>(kChartBias);
  const lie::SE3 cam = origin.cameraPose() * lie::SE3::exp(eps.segment<6>(kChartExt));
  xi.extrinsics = xi.pose.inverse() * cam;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3d q = polarChartInverse(eps.segment<3>(kChartLandmarks + 3 * i));
    xi.landmarks.push_back({origin.landmarks[i].id, cam * q});
  }
  return xi;
}

Eigen::MatrixXd originActionDifferential(std::size_t n) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(chartDim(n), algebraDim(n));
  M.block<21, 21>(0, 0).setIdentity();
  for (std::size_t i = 0; i < n; ++i) {
    const int r = kChartLandmarks + 3 * static_cast<int>(i);
    const int c = kAlgQ + 4 * static_cast<int>(i);
    M(r, c) = 1.0;
    M(r + 1, c + 1) = 1.0;
    M(r + 2, c + 3) = 1.0;
  }
  return M;
}

}  // namespace eqvio::vislam
