#include "eqvio/sim/world.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "eqvio/vislam/actions.hpp"

namespace eqvio::sim {

using Eigen::Vector3d;

lie::SE3 defaultExtrinsics() {
  Eigen::Matrix3d R;
  R.col(0) = -Vector3d::UnitX();
  R.col(1) = Vector3d::UnitZ();
  R.col(2) = Vector3d::UnitY();
  return lie::SE3(lie::SO3::fromMatrix(R), Vector3d(0.05, 0.0, 0.0));
}

void validate(const WorldSpec& spec) {
  validate(spec.trajectory);
  if ((spec.boxMax - spec.boxMin).minCoeff() < 0.0) throw std::invalid_argument("landmark box is inverted");
  if (!(spec.fovHalfAngle > 0.0 && spec.fovHalfAngle < M_PI / 2)) {
    throw std::invalid_argument("field-of-view half-angle must lie in (0, pi/2)");
  }
  const NoiseSpec& n = spec.noise;
  if (n.gyroDensity < 0.0 || n.accelDensity < 0.0 || n.bearingSigma < 0.0) {
    throw std::invalid_argument("noise levels must be non-negative");
  }
}

bool inFieldOfView(const Vector3d& q, double halfAngle) {
  return q.z() > 0.0 && q.z() >= std::cos(halfAngle) * q.norm();
}

Vector3d perturbBearing(const Vector3d& y, double n1, double n2) {
  const Vector3d helper = std::abs(y.x()) < 0.9 ? Vector3d::UnitX() : Vector3d::UnitY();
  const Vector3d b1 = y.cross(helper).normalized();
  const Vector3d b2 = y.cross(b1);
  const Vector3d d = n1 * b1 + n2 * b2;
  const double angle = d.norm();
  if (angle == 0.0) return y;
  return std::cos(angle) * y + std::sin(angle) * d / angle;
}

vislam::ImuInput idealImu(const TrajectoryPoint& p, double gravity) {
  return {p.omega, p.R.matrix().transpose() * (p.a - gravity * Vector3d::UnitZ())};
}

std::vector<SimSample> generateWorld(const WorldSpec& spec) {
  validate(spec);
  const TrajectorySpec& traj = spec.trajectory;
  const NoiseSpec& noise = spec.noise;
  std::mt19937_64 rng(noise.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<vislam::Landmark> landmarks;
  for (std::size_t i = 0; i < spec.numLandmarks; ++i) {
    Vector3d p;
    for (int k = 0; k < 3; ++k) p(k) = spec.boxMin(k) + unit(rng) * (spec.boxMax(k) - spec.boxMin(k));
    landmarks.push_back({static_cast<int>(i), p});
  }

  const auto count = static_cast<std::size_t>(std::llround(traj.duration * traj.imuRate));
  const auto stride = static_cast<std::size_t>(std::llround(traj.imuRate / traj.frameRate));
  const double gyroSigma = noise.gyroDensity * std::sqrt(traj.imuRate);
  const double accelSigma = noise.accelDensity * std::sqrt(traj.imuRate);

  std::vector<SimSample> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    SimSample s;
    s.t = static_cast<double>(j) / traj.imuRate;
    TrajectoryPoint p = evaluate(traj, s.t);

    vislam::VisState truth;
    truth.pose = lie::SE3(p.R, p.x);
    truth.velocity = p.v;
    truth.bias << noise.gyroBias, noise.accelBias;
    truth.extrinsics = spec.extrinsics;
    truth.landmarks = landmarks;
    if (spec.frame) {
      truth = vislam::alpha(*spec.frame, truth);
      p = transform(*spec.frame, p);
    }
    s.truth = truth;

    s.imu = idealImu(p, spec.gravity);
    for (int k = 0; k < 3; ++k) s.imu.omega(k) += noise.gyroBias(k) + gyroSigma * normal(rng);
    for (int k = 0; k < 3; ++k) s.imu.accel(k) += noise.accelBias(k) + accelSigma * normal(rng);

    if (j % stride == 0) {
      vislam::BearingSet bearings;
      for (std::size_t i = 0; i < truth.size(); ++i) {
        const Vector3d q = truth.cameraLandmark(i);
        if (!inFieldOfView(q, spec.fovHalfAngle)) continue;
        const double n1 = noise.bearingSigma * normal(rng);
        const double n2 = noise.bearingSigma * normal(rng);
        bearings.push_back({truth.landmarks[i].id, perturbBearing(q.normalized(), n1, n2)});
      }
      s.bearings = std::move(bearings);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace eqvio::sim
