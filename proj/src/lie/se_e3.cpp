#include "eqvio/lie/se_e3.hpp"

#include <cmath>

namespace eqvio::lie {

namespace {
double wrapAngle(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}
}  // namespace

Eigen::Matrix3d rotZ(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d R;
  R << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return R;
}

SEe3::SEe3(double theta, const Eigen::Vector3d& x) : theta_(wrapAngle(theta)), x_(x) {}

SEe3 SEe3::fromSE3(const SE3& P) {
  const Eigen::Matrix3d& R = P.R().matrix();
  if ((R.col(2) - Eigen::Vector3d::UnitZ()).norm() > 1e-9) {
    throw DomainError("SEe3::fromSE3: rotation does not fix e3");
  }
  return SEe3(std::atan2(R(1, 0), R(0, 0)), P.x());
}

SEe3 SEe3::inverse() const { return SEe3(-theta_, -(rotZ(-theta_) * x_)); }

SEe3 SEe3::operator*(const SEe3& other) const {
  return SEe3(theta_ + other.theta_, x_ + rotZ(theta_) * other.x_);
}

SE3 SEe3::toSE3() const { return SE3(SO3(rotZ(theta_)), x_); }

}  // namespace eqvio::lie
