#include "eqvio/sim/baselines.hpp"

#include <Eigen/Geometry>

#include "eqvio/lie/so3.hpp"

namespace eqvio::sim {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::Vector4d;
using Eigen::VectorXd;
using lie::skew;

namespace {

Vector4d quatVec(const Eigen::Quaterniond& q) { return {q.w(), q.x(), q.y(), q.z()}; }

// Rotation of a possibly unnormalised quaternion (w, v) applied to a.
Vector3d rotateByQuat(const Vector4d& q, const Vector3d& a) {
  const double w = q(0);
  const Vector3d v = q.tail<3>();
  return (w * w - v.squaredNorm()) * a + 2.0 * v.dot(a) * v + 2.0 * w * v.cross(a);
}

Eigen::Matrix<double, 3, 4> rotateByQuatJacobian(const Vector4d& q, const Vector3d& a) {
  const double w = q(0);
  const Vector3d v = q.tail<3>();
  Eigen::Matrix<double, 3, 4> J;
  J.col(0) = 2.0 * w * a + 2.0 * v.cross(a);
  J.rightCols<3>() = -2.0 * a * v.transpose() + 2.0 * v * a.transpose() + 2.0 * v.dot(a) * Matrix3d::Identity() -
                     2.0 * w * skew(a);
  return J;
}

// q_dot = Omega_R(w) q for body-frame rate w.
Eigen::Matrix4d quatRateMatrix(const Vector3d& w) {
  Eigen::Matrix4d M;
  M(0, 0) = 0.0;
  M.block<1, 3>(0, 1) = -w.transpose();
  M.block<3, 1>(1, 0) = w;
  M.block<3, 3>(1, 1) = -skew(w);
  return 0.5 * M;
}

// Nominal state and covariance integrated together with classical RK4.
template <typename State, typename Flow, typename Jac>
void integrate(State& s, MatrixXd& P, double h, Flow flow, Jac jac) {
  auto dP = [&](const State& y, const MatrixXd& S) {
    const MatrixXd F = jac(y);
    return MatrixXd(F * S + S * F.transpose());
  };
  const State k1 = flow(s);
  const MatrixXd l1 = dP(s, P);
  const State s2 = s + h / 2 * k1;
  const State k2 = flow(s2);
  const MatrixXd l2 = dP(s2, P + h / 2 * l1);
  const State s3 = s + h / 2 * k2;
  const State k3 = flow(s3);
  const MatrixXd l3 = dP(s3, P + h / 2 * l2);
  const State s4 = s + h * k3;
  const State k4 = flow(s4);
  const MatrixXd l4 = dP(s4, P + h * l3);
  s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  P = P + h / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
  P = 0.5 * (P + P.transpose());
}

}  // namespace

VectorXd ekfCoords(const lie::SE23& estimate, const lie::SE23& truth) {
  const Vector4d qh = quatVec(estimate.R().quaternion());
  Vector4d q = quatVec(truth.R().quaternion());
  if (q.dot(qh) < 0.0) q = -q;
  VectorXd eps(10);
  eps << q - qh, truth.x() - estimate.x(), truth.v() - estimate.v();
  return eps;
}

lie::SE23 ekfCoordsInverse(const lie::SE23& estimate, const VectorXd& eps) {
  const Vector4d q = quatVec(estimate.R().quaternion()) + eps.head<4>();
  const Eigen::Quaterniond quat(q(0), q(1), q(2), q(3));
  return lie::SE23(lie::SO3::fromQuaternion(quat), estimate.x() + eps.segment<3>(4), estimate.v() + eps.tail<3>());
}

VectorXd mekfCoords(const lie::SE23& estimate, const lie::SE23& truth) {
  VectorXd eps(9);
  eps << (truth.R() * estimate.R().inverse()).log(), truth.x() - estimate.x(), truth.v() - estimate.v();
  return eps;
}

lie::SE23 mekfCoordsInverse(const lie::SE23& estimate, const VectorXd& eps) {
  return lie::SE23(lie::SO3::exp(eps.head<3>()) * estimate.R(), estimate.x() + eps.segment<3>(3),
                   estimate.v() + eps.tail<3>());
}

CovarianceTrack ekfPropagate(const ParticleSpec& spec) {
  using State = Eigen::Matrix<double, 10, 1>;
  const Vector3d w = spec.input.omega, a = spec.input.accel;
  const Vector3d gE3 = spec.gravity * Vector3d::UnitZ();
  const Eigen::Matrix4d Wq = quatRateMatrix(w);

  auto flow = [&](const State& s) {
    State d;
    d << Wq * s.head<4>(), s.tail<3>(), rotateByQuat(s.head<4>(), a) + gE3;
    return d;
  };
  auto jac = [&](const State& s) {
    MatrixXd F = MatrixXd::Zero(10, 10);
    F.topLeftCorner<4, 4>() = Wq;
    F.block<3, 3>(4, 7).setIdentity();
    F.block<3, 4>(7, 0) = rotateByQuatJacobian(s.head<4>(), a);
    return F;
  };

  // Initial covariance mapped through the coordinate change at the identity.
  MatrixXd J = MatrixXd::Zero(10, 9);
  J.block<3, 3>(1, 0) = 0.5 * Matrix3d::Identity();
  J.block<6, 6>(4, 3).setIdentity();
  MatrixXd P = J * spec.sigma0 * J.transpose();
  State s = State::Zero();
  s(0) = 1.0;

  CovarianceTrack track;
  track.times = snapshotTimes(spec);
  auto record = [&] {
    const Eigen::Quaterniond q(s(0), s(1), s(2), s(3));
    track.estimate.push_back(lie::SE23(lie::SO3::fromQuaternion(q), s.segment<3>(4), s.tail<3>()));
    track.sigma.push_back(P);
  };
  record();
  for (std::size_t k = 1; k < track.times.size(); ++k) {
    const double h = (track.times[k] - track.times[k - 1]) / spec.substeps;
    for (int j = 0; j < spec.substeps; ++j) integrate(s, P, h, flow, jac);
    record();
  }
  return track;
}

CovarianceTrack mekfPropagate(const ParticleSpec& spec) {
  using State = Eigen::Matrix<double, 15, 1>;  // R (column-major), x, v
  const Matrix3d W = skew(spec.input.omega);
  const Vector3d a = spec.input.accel;
  const Vector3d gE3 = spec.gravity * Vector3d::UnitZ();
  auto rot = [](const State& s) { return Eigen::Map<const Matrix3d>(s.data()); };

  auto flow = [&](const State& s) {
    State d;
    const Matrix3d dR = rot(s) * W;
    d << Eigen::Map<const Eigen::Matrix<double, 9, 1>>(dR.data()), s.tail<3>(), rot(s) * a + gE3;
    return d;
  };
  auto jac = [&](const State& s) {
    MatrixXd F = MatrixXd::Zero(9, 9);
    F.block<3, 3>(3, 6).setIdentity();
    F.block<3, 3>(6, 0) = -skew(rot(s) * a);
    return F;
  };

  MatrixXd P = spec.sigma0;
  State s = State::Zero();
  s.head<9>() = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(Matrix3d::Identity().eval().data());

  CovarianceTrack track;
  track.times = snapshotTimes(spec);
  auto record = [&] {
    const lie::SO3 R = lie::SO3::fromMatrix(lie::projectToRotation(rot(s)));
    track.estimate.push_back(lie::SE23(R, s.segment<3>(9), s.tail<3>()));
    track.sigma.push_back(P);
  };
  record();
  for (std::size_t k = 1; k < track.times.size(); ++k) {
    const double h = (track.times[k] - track.times[k - 1]) / spec.substeps;
    for (int j = 0; j < spec.substeps; ++j) integrate(s, P, h, flow, jac);
    record();
  }
  return track;
}

}  // namespace eqvio::sim
