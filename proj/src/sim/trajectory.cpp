#include "eqvio/sim/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "eqvio/lie/se3.hpp"

namespace eqvio::sim {

using Eigen::Vector3d;

const char* trajectoryName(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Circle:
      return "circle";
    case TrajectoryKind::FigureEight:
      return "figure8";
    case TrajectoryKind::ConstantTwist:
      return "twist";
  }
  return "unknown";
}

TrajectoryKind trajectoryFromName(const std::string& name) {
  if (name == "circle") return TrajectoryKind::Circle;
  if (name == "figure8") return TrajectoryKind::FigureEight;
  if (name == "twist") return TrajectoryKind::ConstantTwist;
  throw std::invalid_argument("unknown trajectory '" + name + "'");
}

void validate(const TrajectorySpec& spec) {
  if (!(spec.duration > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(spec.imuRate > 0.0) || !(spec.frameRate > 0.0)) throw std::invalid_argument("rates must be positive");
  if (!(spec.radius > 0.0) || !(spec.period > 0.0)) throw std::invalid_argument("radius and period must be positive");
  if (spec.frameRate > spec.imuRate) throw std::invalid_argument("frame rate exceeds IMU rate");
  const double ratio = spec.imuRate / spec.frameRate;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw std::invalid_argument("IMU rate must be an integer multiple of the frame rate");
  }
}

lie::SO3 eulerToRotation(double roll, double pitch, double yaw) {
  return lie::SO3::exp(yaw * Vector3d::UnitZ()) * lie::SO3::exp(pitch * Vector3d::UnitY()) *
         lie::SO3::exp(roll * Vector3d::UnitX());
}

Vector3d eulerRatesToBody(const Vector3d& rpy, const Vector3d& rate) {
  const double sr = std::sin(rpy(0)), cr = std::cos(rpy(0));
  const double sp = std::sin(rpy(1)), cp = std::cos(rpy(1));
  return {rate(0) - rate(2) * sp, rate(1) * cr + rate(2) * cp * sr, -rate(1) * sr + rate(2) * cp * cr};
}

namespace {

// a sin(k w t + c) with its first and second derivatives.
struct Wave {
  double a, k, c;
  double value(double w, double t) const { return a * std::sin(k * w * t + c); }
  double rate(double w, double t) const { return a * k * w * std::cos(k * w * t + c); }
  double accel(double w, double t) const { return -a * k * k * w * w * std::sin(k * w * t + c); }
};

TrajectoryPoint fromEuler(const Vector3d& rpy, const Vector3d& rpyRate) {
  TrajectoryPoint p;
  p.R = eulerToRotation(rpy(0), rpy(1), rpy(2));
  p.omega = eulerRatesToBody(rpy, rpyRate);
  return p;
}

TrajectoryPoint circle(const TrajectorySpec& s, double t) {
  const double w = 2.0 * M_PI / s.period;
  const Wave roll{s.excitation, 3.0, 0.0}, pitch{s.excitation, 4.0, 0.5}, heave{s.heave, 5.0, 0.0};
  // Angle along the circle with a speed modulation.
  const Wave surge{0.25, 2.0, 0.0};
  const double th = w * t + surge.value(w, t);
  const double thd = w + surge.rate(w, t);
  const double thdd = surge.accel(w, t);
  TrajectoryPoint p = fromEuler({roll.value(w, t), pitch.value(w, t), th + M_PI / 2},
                                {roll.rate(w, t), pitch.rate(w, t), thd});
  const double c = std::cos(th), sn = std::sin(th), r = s.radius;
  p.x = {r * c, r * sn, -s.altitude + heave.value(w, t)};
  p.v = {-r * thd * sn, r * thd * c, heave.rate(w, t)};
  p.a = {-r * thdd * sn - r * thd * thd * c, r * thdd * c - r * thd * thd * sn, heave.accel(w, t)};
  return p;
}

TrajectoryPoint figureEight(const TrajectorySpec& s, double t) {
  const double w = 2.0 * M_PI / s.period;
  const Wave roll{s.excitation, 3.0, 0.0}, pitch{s.excitation, 2.0, 0.5}, yaw{0.3, 1.0, 0.0};
  const Wave ex{s.radius, 1.0, 0.0}, ey{0.25 * s.radius, 2.0, 0.0}, ez{s.heave, 3.0, 0.0};
  TrajectoryPoint p = fromEuler({roll.value(w, t), pitch.value(w, t), yaw.value(w, t)},
                                {roll.rate(w, t), pitch.rate(w, t), yaw.rate(w, t)});
  p.x = {ex.value(w, t), -s.radius + ey.value(w, t), -s.altitude + ez.value(w, t)};
  p.v = {ex.rate(w, t), ey.rate(w, t), ez.rate(w, t)};
  p.a = {ex.accel(w, t), ey.accel(w, t), ez.accel(w, t)};
  return p;
}

TrajectoryPoint constantTwist(const TrajectorySpec& s, double t) {
  const double w = 2.0 * M_PI / s.period;
  const Vector3d omega(0.0, 0.0, w);
  const Vector3d vBody(s.radius * w, 0.0, 0.0);
  const lie::SE3 P0(lie::SO3::exp(M_PI / 2 * Vector3d::UnitZ()), Vector3d(s.radius, 0.0, -s.altitude));
  lie::Vector6d twist;
  twist << omega, vBody;
  const lie::SE3 P = P0 * lie::SE3::exp(t * twist);
  TrajectoryPoint p;
  p.R = P.R();
  p.omega = omega;
  p.x = P.x();
  p.v = P.R().matrix() * vBody;
  p.a = P.R().matrix() * omega.cross(vBody);
  return p;
}

}  // namespace

TrajectoryPoint evaluate(const TrajectorySpec& spec, double t) {
  switch (spec.kind) {
    case TrajectoryKind::Circle:
      return circle(spec, t);
    case TrajectoryKind::FigureEight:
      return figureEight(spec, t);
    case TrajectoryKind::ConstantTwist:
      return constantTwist(spec, t);
  }
  throw std::invalid_argument("unknown trajectory kind");
}

TrajectoryPoint transform(const lie::SEe3& S, const TrajectoryPoint& p) {
  const lie::SE3 P = S.inverse().toSE3() * lie::SE3(p.R, p.x);
  const Eigen::Matrix3d RSt = S.rotation().transpose();
  TrajectoryPoint out;
  out.R = P.R();
  out.omega = p.omega;
  out.x = P.x();
  out.v = RSt * p.v;
  out.a = RSt * p.a;
  return out;
}

}  // namespace eqvio::sim
