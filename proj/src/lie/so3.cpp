#include "eqvio/lie/so3.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "coefficients.hpp"

namespace eqvio::lie {

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d W;
  W << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return W;
}

Eigen::Vector3d unskew(const Eigen::Matrix3d& W) {
  return 0.5 * Eigen::Vector3d(W(2, 1) - W(1, 2), W(0, 2) - W(2, 0), W(1, 0) - W(0, 1));
}

Eigen::Matrix3d so3LeftJacobian(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d W = skew(w);
  return Eigen::Matrix3d::Identity() + detail::coeffB(theta) * W + detail::coeffC(theta) * W * W;
}

Eigen::Matrix3d so3LeftJacobianInverse(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d W = skew(w);
  return Eigen::Matrix3d::Identity() - 0.5 * W + detail::coeffJinv(theta) * W * W;
}

Eigen::Vector3d sphereProject(const Eigen::Vector3d& x) {
  const double n = x.norm();
  if (n <= 1e-12) throw DomainError("sphereProject: vector too close to zero");
  return x / n;
}

Eigen::Matrix3d projectToRotation(const Eigen::Matrix3d& M) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) D(2, 2) = -1.0;
  return svd.matrixU() * D * svd.matrixV().transpose();
}

SO3 SO3::fromQuaternion(const Eigen::Quaterniond& q) {
  return SO3(q.normalized().toRotationMatrix());
}

SO3 SO3::exp(const Algebra& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d W = skew(w);
  if (theta < kSmallAngle) {
    return SO3(Eigen::Matrix3d::Identity() + W + 0.5 * W * W);
  }
  return SO3(Eigen::Matrix3d::Identity() + detail::coeffA(theta) * W + detail::coeffB(theta) * W * W);
}

double SO3::angle() const {
  const double c = 0.5 * (R_.trace() - 1.0);
  const double s = unskew(R_).norm();
  return std::atan2(s, c);
}

SO3::Algebra SO3::log() const {
  const double c = 0.5 * (R_.trace() - 1.0);
  const Eigen::Vector3d s = unskew(R_);
  const double sn = s.norm();
  const double theta = std::atan2(sn, c);
  if (M_PI - theta < kCutLocusTol) {
    throw DomainError("SO3::log: rotation angle too close to pi");
  }
  if (theta < kSmallAngle) return s * (1.0 + theta * theta / 6.0);
  if (theta < 3.0) return (theta / sn) * s;

  // Near pi the antisymmetric part is small; read the axis from the symmetric part.
  const Eigen::Matrix3d B = 0.5 * (R_ + R_.transpose()) - c * Eigen::Matrix3d::Identity();
  int k = 0;
  B.diagonal().maxCoeff(&k);
  Eigen::Vector3d n = B.col(k) / std::sqrt(B(k, k) * (1.0 - c));
  n.normalize();
  if (n.dot(s) < 0.0) n = -n;
  return theta * n;
}

SO3 SO3::inverse() const {
  SO3 out(R_.transpose());
  out.compositions_ = compositions_;
  return out;
}

SO3 SO3::operator*(const SO3& other) const {
  SO3 out(R_ * other.R_);
  out.compositions_ = std::max(compositions_, other.compositions_) + 1;
  const bool drifted =
      (out.R_.transpose() * out.R_ - Eigen::Matrix3d::Identity()).norm() > kReorthoDrift;
  if (out.compositions_ >= kReorthoPeriod || drifted) {
    out.R_ = projectToRotation(out.R_);
    out.compositions_ = 0;
  }
  return out;
}

Eigen::Quaterniond SO3::quaternion() const {
  Eigen::Quaterniond q(R_);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

}  // namespace eqvio::lie
