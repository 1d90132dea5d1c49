#include "eqvio/vislam/state.hpp"

#include <set>
#include <string>

namespace eqvio::vislam {

void VisState::setNav(const lie::SE23& n) {
  pose = lie::SE3(n.R(), n.x());
  velocity = n.v();
}

Eigen::Vector3d VisState::cameraLandmark(std::size_t i) const {
  return cameraPose().inverse() * landmarks.at(i).p;
}

std::vector<int> VisState::ids() const {
  std::vector<int> out;
  out.reserve(landmarks.size());
  for (const auto& l : landmarks) out.push_back(l.id);
  return out;
}

Eigen::VectorXd VisStateTangent::flatten() const {
  Eigen::VectorXd out(33 + 3 * dp.size());
  out.segment<9>(0) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(dR.data());
  out.segment<3>(9) = dx;
  out.segment<3>(12) = dv;
  out.segment<6>(15) = db;
  out.segment<9>(21) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(dRT.data());
  out.segment<3>(30) = dxT;
  for (std::size_t i = 0; i < dp.size(); ++i) out.segment<3>(33 + 3 * i) = dp[i];
  return out;
}

Eigen::VectorXd embedState(const VisState& xi) {
  Eigen::VectorXd out(33 + 3 * xi.landmarks.size());
  out.segment<9>(0) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(xi.pose.R().matrix().data());
  out.segment<3>(9) = xi.pose.x();
  out.segment<3>(12) = xi.velocity;
  out.segment<6>(15) = xi.bias;
  out.segment<9>(21) =
      Eigen::Map<const Eigen::Matrix<double, 9, 1>>(xi.extrinsics.R().matrix().data());
  out.segment<3>(30) = xi.extrinsics.x();
  for (std::size_t i = 0; i < xi.landmarks.size(); ++i) {
    out.segment<3>(33 + 3 * i) = xi.landmarks[i].p;
  }
  return out;
}

void checkValid(const VisState& xi) {
  std::set<int> seen;
  const lie::SE3 camInv = xi.cameraPose().inverse();
  for (const auto& l : xi.landmarks) {
    if (!seen.insert(l.id).second) {
      throw IdMismatchError("duplicate landmark id " + std::to_string(l.id));
    }
    if ((camInv * l.p).norm() <= kExceptionTol) {
      throw ExceptionSetError("landmark " + std::to_string(l.id) + " is at the camera centre");
    }
  }
}

VisState makeOrigin(const lie::SE3& pose, const Eigen::Vector3d& velocity, const Vector6d& bias,
                    const lie::SE3& extrinsics, const std::vector<int>& ids) {
  VisState xi;
  xi.pose = pose;
  xi.velocity = velocity;
  xi.bias = bias;
  xi.extrinsics = extrinsics;
  return withOriginLandmarks(xi, ids);
}

VisState withOriginLandmarks(const VisState& origin, const std::vector<int>& ids) {
  VisState xi = origin;
  const Eigen::Vector3d p0 = origin.cameraPose() * Eigen::Vector3d::UnitZ();
  xi.landmarks.clear();
  for (int id : ids) xi.landmarks.push_back({id, p0});
  return xi;
}

}  // namespace eqvio::vislam
