#include "eqvio/vislam/actions.hpp"

#include <cmath>
#include <string>

namespace eqvio::vislam {

using Eigen::Vector3d;
using lie::skew;

VisStateTangent dynamics(const VisState& xi, const ImuInput& u, double gravity) {
  const Eigen::Matrix3d& R = xi.pose.R().matrix();
  VisStateTangent d;
  d.dR = R * skew(u.omega - xi.bias.head<3>());
  d.dx = xi.velocity;
  d.dv = R * (u.accel - xi.bias.tail<3>()) + gravity * Vector3d::UnitZ();
  d.dp.assign(xi.landmarks.size(), Vector3d::Zero());
  return d;
}

BearingSet measure(const VisState& xi) {
  const lie::SE3 camInv = xi.cameraPose().inverse();
  BearingSet y;
  y.reserve(xi.landmarks.size());
  for (const auto& l : xi.landmarks) {
    const Vector3d q = camInv * l.p;
    if (q.norm() <= kExceptionTol) {
      throw ExceptionSetError("landmark " + std::to_string(l.id) + " is at the camera centre");
    }
    y.push_back({l.id, q / q.norm()});
  }
  return y;
}

VisState alpha(const lie::SEe3& S, const VisState& xi) {
  const lie::SEe3 Sinv = S.inverse();
  const Eigen::Matrix3d RSt = S.rotation().transpose();
  VisState out = xi;
  out.pose = Sinv.toSE3() * xi.pose;
  out.velocity = RSt * xi.velocity;
  for (auto& l : out.landmarks) l.p = Sinv * l.p;
  return out;
}

VisStateTangent alphaTangent(const lie::SEe3& S, const VisStateTangent& d) {
  const Eigen::Matrix3d RSt = S.rotation().transpose();
  VisStateTangent out = d;
  out.dR = RSt * d.dR;
  out.dx = RSt * d.dx;
  out.dv = RSt * d.dv;
  for (auto& p : out.dp) p = RSt * p;
  return out;
}

lie::SE23 phiNav(const lie::SE23& A, const lie::SE23& navState) { return navState * A; }

VisState phi(const VisGroup& X, const VisState& xi) {
  if (X.Q.size() != xi.landmarks.size()) {
    throw IdMismatchError("phi: landmark count mismatch");
  }
  VisState out;
  out.setNav(phiNav(X.A, xi.nav()));
  out.bias = xi.bias + X.beta;
  const lie::SE3 PA(X.A.R(), X.A.x());
  out.extrinsics = PA.inverse() * xi.extrinsics * X.B;

  const lie::SE3 cam = xi.cameraPose();
  const lie::SE3 camInv = cam.inverse();
  const lie::SE3 camNew = cam * X.B;
  out.landmarks.reserve(xi.landmarks.size());
  for (std::size_t i = 0; i < xi.landmarks.size(); ++i) {
    if (X.Q[i].id != xi.landmarks[i].id) {
      throw IdMismatchError("phi: landmark id mismatch at " + std::to_string(X.Q[i].id));
    }
    const Vector3d q = landmarkPhi(X.Q[i].Q, camInv * xi.landmarks[i].p);
    out.landmarks.push_back({xi.landmarks[i].id, camNew * q});
  }
  return out;
}

BearingSet rho(const VisGroup& X, const BearingSet& y) {
  if (X.Q.size() != y.size()) throw IdMismatchError("rho: landmark count mismatch");
  BearingSet out;
  out.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (X.Q[i].id != y[i].id) {
      throw IdMismatchError("rho: landmark id mismatch at " + std::to_string(y[i].id));
    }
    out.push_back({y[i].id, landmarkRho(X.Q[i].Q, y[i].y)});
  }
  return out;
}

lie::SO3 minimalRotation(const Vector3d& a, const Vector3d& b) {
  const Vector3d axis = a.cross(b);
  const double s = axis.norm();
  const double c = a.dot(b);
  if (s < 1e-12 && c < 0.0) {
    // Antiparallel: any perpendicular axis works.
    Vector3d perp = a.cross(Vector3d::UnitX());
    if (perp.norm() < 0.5) perp = a.cross(Vector3d::UnitY());
    return lie::SO3::exp(M_PI * perp.normalized());
  }
  if (s < 1e-300) return lie::SO3();
  return lie::SO3::exp(std::atan2(s, c) / s * axis);
}

lie::SOT3 landmarkTransporter(const Vector3d& q1, const Vector3d& q2) {
  const double n1 = q1.norm(), n2 = q2.norm();
  if (n1 <= kExceptionTol || n2 <= kExceptionTol) {
    throw ExceptionSetError("landmarkTransporter: landmark at the camera centre");
  }
  return lie::SOT3(minimalRotation(q2 / n2, q1 / n1), n1 / n2);
}

VisGroup transporter(const VisState& xi1, const VisState& xi2) {
  if (xi1.landmarks.size() != xi2.landmarks.size()) {
    throw IdMismatchError("transporter: landmark count mismatch");
  }
  VisGroup X;
  const lie::SE3 P1 = xi1.pose, P2 = xi2.pose;
  const lie::SE3 PA = P1.inverse() * P2;
  const Vector3d vA = P1.R().matrix().transpose() * (xi2.velocity - xi1.velocity);
  X.A = lie::SE23(PA.R(), PA.x(), vA);
  X.beta = xi2.bias - xi1.bias;
  const lie::SE3 C1 = xi1.cameraPose(), C2 = xi2.cameraPose();
  X.B = C1.inverse() * C2;
  const lie::SE3 C1inv = C1.inverse(), C2inv = C2.inverse();
  for (std::size_t i = 0; i < xi1.landmarks.size(); ++i) {
    if (xi1.landmarks[i].id != xi2.landmarks[i].id) {
      throw IdMismatchError("transporter: landmark id mismatch");
    }
    const Vector3d q1 = C1inv * xi1.landmarks[i].p;
    const Vector3d q2 = C2inv * xi2.landmarks[i].p;
    X.Q.push_back({xi1.landmarks[i].id, landmarkTransporter(q1, q2)});
  }
  return X;
}

Eigen::Vector4d landmarkLift(const Vector3d& q, const Vector3d& omegaC, const Vector3d& vC) {
  const double q2 = q.squaredNorm();
  if (q2 <= kExceptionTol * kExceptionTol) {
    throw ExceptionSetError("lift: landmark at the camera centre");
  }
  Eigen::Vector4d out;
  out << omegaC + q.cross(vC) / q2, q.dot(vC) / q2;
  return out;
}

Eigen::VectorXd lift(const VisState& xi, const ImuInput& u, double gravity) {
  const Eigen::Matrix3d Rt = xi.pose.R().matrix().transpose();
  const Vector3d w = u.omega - xi.bias.head<3>();
  const Vector3d nu = Rt * xi.velocity;
  const Vector3d acc = u.accel - xi.bias.tail<3>() + gravity * Rt.col(2);

  Eigen::VectorXd L = Eigen::VectorXd::Zero(algebraDim(xi.landmarks.size()));
  L.segment<3>(kAlgA) = w;
  L.segment<3>(kAlgA + 3) = nu;
  L.segment<3>(kAlgA + 6) = acc;

  lie::Vector6d uA;
  uA << w, nu;
  const lie::Vector6d uB = xi.extrinsics.inverse().Adjoint() * uA;
  L.segment<6>(kAlgB) = uB;

  const lie::SE3 camInv = xi.cameraPose().inverse();
  for (std::size_t i = 0; i < xi.landmarks.size(); ++i) {
    const Vector3d q = camInv * xi.landmarks[i].p;
    L.segment<4>(kAlgQ + 4 * i) = landmarkLift(q, uB.head<3>(), uB.tail<3>());
  }
  return L;
}

Vector3d landmarkDynamics(const Vector3d& q, const Vector3d& omegaC, const Vector3d& vC) {
  return -omegaC.cross(q) - vC;
}

Vector3d landmarkMeasure(const Vector3d& q) {
  if (q.norm() <= kExceptionTol) throw ExceptionSetError("landmark at the camera centre");
  return lie::sphereProject(q);
}

Vector3d landmarkPhi(const lie::SOT3& Q, const Vector3d& q) {
  return (Q.R().matrix().transpose() * q) / Q.c();
}

Vector3d landmarkRho(const lie::SOT3& Q, const Vector3d& y) {
  return Q.R().matrix().transpose() * y;
}

}  // namespace eqvio::vislam
