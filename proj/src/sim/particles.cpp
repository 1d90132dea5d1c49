#include "eqvio/sim/particles.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "eqvio/lie/so3.hpp"

namespace eqvio::sim {

using Eigen::Matrix3d;
using Eigen::Vector3d;

lie::Matrix9d defaultParticleSigma0() {
  lie::Vector9d d;
  d << Vector3d::Constant(0.2 * 0.2), Vector3d::Constant(0.01 * 0.01), Vector3d::Constant(0.01 * 0.01);
  return d.asDiagonal();
}

vislam::ImuInput defaultParticleInput() { return {Vector3d(0.0, 0.0, 0.1), Vector3d(0.1, 0.0, 0.0)}; }

std::vector<double> snapshotTimes(const ParticleSpec& spec) {
  std::vector<double> times;
  const auto n = static_cast<int>(std::llround(spec.horizon / spec.step));
  for (int k = 0; k <= n; ++k) times.push_back(k * spec.step);
  return times;
}

namespace {

struct NavMatrix {
  Matrix3d R;
  Vector3d x, v;
};

NavMatrix rk4(const NavMatrix& s, const vislam::ImuInput& u, double h, double g) {
  const Matrix3d W = lie::skew(u.omega);
  auto f = [&](const NavMatrix& y) {
    return NavMatrix{y.R * W, y.v, y.R * u.accel + g * Vector3d::UnitZ()};
  };
  auto add = [](const NavMatrix& y, const NavMatrix& d, double c) {
    return NavMatrix{y.R + c * d.R, y.x + c * d.x, y.v + c * d.v};
  };
  const NavMatrix k1 = f(s), k2 = f(add(s, k1, h / 2)), k3 = f(add(s, k2, h / 2)), k4 = f(add(s, k3, h));
  return NavMatrix{s.R + h / 6 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R),
                   s.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                   s.v + h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

lie::SE23 toSE23(const NavMatrix& s) { return lie::SE23(lie::SO3::fromMatrix(lie::projectToRotation(s.R)), s.x, s.v); }

}  // namespace

lie::SE23 integrateNav(const lie::SE23& start, const vislam::ImuInput& u, double duration, int steps,
                       double gravity) {
  NavMatrix s{start.R().matrix(), start.x(), start.v()};
  const double h = duration / steps;
  for (int k = 0; k < steps; ++k) s = rk4(s, u, h, gravity);
  return toSE23(s);
}

Eigen::MatrixXd covarianceSqrt(const Eigen::MatrixXd& S) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

ParticleCloud sampleParticles(const ParticleSpec& spec) {
  ParticleCloud cloud;
  cloud.times = snapshotTimes(spec);
  const Eigen::MatrixXd L = covarianceSqrt(spec.sigma0);
  const std::size_t snaps = cloud.times.size();
  cloud.particles.assign(snaps, std::vector<lie::SE23>(spec.count));

  auto run = [&](const lie::SE23& start, std::vector<lie::SE23>& track) {
    NavMatrix s{start.R().matrix(), start.x(), start.v()};
    track.push_back(start);
    for (std::size_t k = 1; k < snaps; ++k) {
      const double h = (cloud.times[k] - cloud.times[k - 1]) / spec.substeps;
      for (int j = 0; j < spec.substeps; ++j) s = rk4(s, spec.input, h, spec.gravity);
      track.push_back(toSE23(s));
    }
  };

  run(lie::SE23::identity(), cloud.nominal);
  for (std::size_t i = 0; i < spec.count; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    lie::Vector9d z;
    for (int k = 0; k < 9; ++k) z(k) = normal(rng);
    std::vector<lie::SE23> track;
    run(lie::SE23::exp(L * z), track);
    for (std::size_t k = 0; k < snaps; ++k) cloud.particles[k][i] = track[k];
  }
  return cloud;
}

}  // namespace eqvio::sim
