#include <gtest/gtest.h>

#include <cmath>

#include "eqvio/sim/baselines.hpp"
#include "eqvio/sim/particles.hpp"
#include "eqvio/sim/trajectory.hpp"
#include "eqvio/sim/world.hpp"
#include "eqvio/vislam/actions.hpp"
#include "test_support.hpp"

namespace eqvio::sim {
namespace {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

const TrajectoryKind kKinds[] = {TrajectoryKind::Circle, TrajectoryKind::FigureEight,
                                 TrajectoryKind::ConstantTwist};

TrajectorySpec specFor(TrajectoryKind kind) {
  TrajectorySpec s;
  s.kind = kind;
  return s;
}

MatrixXd sampleCovariance(const std::vector<VectorXd>& xs) {
  VectorXd mean = VectorXd::Zero(xs[0].size());
  for (const auto& x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  MatrixXd S = MatrixXd::Zero(mean.size(), mean.size());
  for (const auto& x : xs) S += (x - mean) * (x - mean).transpose();
  return S / static_cast<double>(xs.size() - 1);
}

TEST(TrajectoryTest, NamesRoundTrip) {
  for (auto k : kKinds) EXPECT_EQ(trajectoryFromName(trajectoryName(k)), k);
  EXPECT_THROW(trajectoryFromName("spiral"), std::invalid_argument);
}

TEST(TrajectoryTest, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (auto kind : kKinds) {
    const TrajectorySpec spec = specFor(kind);
    for (double t : {0.3, 4.1, 11.7, 37.2}) {
      const TrajectoryPoint p = evaluate(spec, t), pp = evaluate(spec, t + h), pm = evaluate(spec, t - h);
      const Matrix3d dR = (pp.R.matrix() - pm.R.matrix()) / (2 * h);
      EXPECT_LT((p.R.matrix().transpose() * dR - lie::skew(p.omega)).norm(), 1e-8) << trajectoryName(kind);
      EXPECT_LT((p.v - (pp.x - pm.x) / (2 * h)).norm(), 1e-8) << trajectoryName(kind);
      EXPECT_LT((p.a - (pp.v - pm.v) / (2 * h)).norm(), 1e-8) << trajectoryName(kind);
    }
  }
}

TEST(TrajectoryTest, CircleCameraFacesCentre) {
  TrajectorySpec spec;
  spec.excitation = 0.0;
  spec.heave = 0.0;
  const lie::SE3 T = defaultExtrinsics();
  for (double t : {0.0, 5.0, 12.5}) {
    const TrajectoryPoint p = evaluate(spec, t);
    const Vector3d axis = p.R.matrix() * T.R().matrix() * Vector3d::UnitZ();
    const Vector3d toCentre = (Vector3d(0, 0, -spec.altitude) - p.x).normalized();
    EXPECT_GT(axis.dot(toCentre), 1.0 - 1e-12);
  }
}

TEST(TrajectoryTest, InvalidSpecsRejected) {
  TrajectorySpec s;
  s.duration = 0.0;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = TrajectorySpec{};
  s.frameRate = 30.0;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = TrajectorySpec{};
  s.imuRate = -1.0;
  EXPECT_THROW(validate(s), std::invalid_argument);
}

TEST(TrajectoryTest, ConstantTwistHasConstantImu) {
  const TrajectorySpec spec = specFor(TrajectoryKind::ConstantTwist);
  const vislam::ImuInput u0 = idealImu(evaluate(spec, 0.0), vislam::kGravity);
  const vislam::ImuInput u1 = idealImu(evaluate(spec, 13.0), vislam::kGravity);
  EXPECT_LT((u0.omega - u1.omega).norm(), 1e-12);
  EXPECT_LT((u0.accel - u1.accel).norm(), 1e-12);
}

// RK4 with step 2/rate, whose stages fall exactly on emitted IMU samples.
TEST(WorldTest, ImuReintegrationReproducesTruth) {
  for (auto kind : kKinds) {
    WorldSpec spec;
    spec.trajectory = specFor(kind);
    spec.trajectory.duration = 10.0 + 2.0 / spec.trajectory.imuRate;
    const auto samples = generateWorld(spec);
    const double g = spec.gravity;
    struct Nav {
      Matrix3d R;
      Vector3d x, v;
    };
    auto f = [g](const Nav& y, const vislam::ImuInput& u) {
      return Nav{y.R * lie::skew(u.omega), y.v, y.R * u.accel + g * Vector3d::UnitZ()};
    };
    auto add = [](const Nav& y, const Nav& d, double c) { return Nav{y.R + c * d.R, y.x + c * d.x, y.v + c * d.v}; };
    Nav s{samples[0].truth.pose.R().matrix(), samples[0].truth.pose.x(), samples[0].truth.velocity};
    const double h = 2.0 / spec.trajectory.imuRate;
    std::size_t j = 0;
    for (; j + 2 < samples.size(); j += 2) {
      const Nav k1 = f(s, samples[j].imu);
      const Nav k2 = f(add(s, k1, h / 2), samples[j + 1].imu);
      const Nav k3 = f(add(s, k2, h / 2), samples[j + 1].imu);
      const Nav k4 = f(add(s, k3, h), samples[j + 2].imu);
      s = Nav{s.R + h / 6 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R), s.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
              s.v + h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
    }
    EXPECT_NEAR(samples[j].t, 10.0, 1e-12);
    EXPECT_LT((s.x - samples[j].truth.pose.x()).norm(), 1e-6) << trajectoryName(kind);
    EXPECT_LT((s.v - samples[j].truth.velocity).norm(), 1e-6) << trajectoryName(kind);
    EXPECT_LT((s.R - samples[j].truth.pose.R().matrix()).norm(), 1e-6) << trajectoryName(kind);
  }
}

TEST(WorldTest, CountsFollowRates) {
  WorldSpec spec;
  spec.trajectory.duration = 3.0;
  const auto samples = generateWorld(spec);
  EXPECT_EQ(samples.size(), 600u);
  std::size_t frames = 0;
  for (const auto& s : samples) frames += s.bearings.has_value();
  EXPECT_EQ(frames, 60u);
  EXPECT_TRUE(samples[0].bearings.has_value());
  EXPECT_FALSE(samples[1].bearings.has_value());
}

TEST(WorldTest, NoiseFreeBearingsEqualMeasurement) {
  WorldSpec spec;
  spec.trajectory.duration = 5.0;
  const auto samples = generateWorld(spec);
  for (const auto& s : samples) {
    if (!s.bearings) continue;
    const auto all = vislam::measure(s.truth);
    for (const auto& b : *s.bearings) EXPECT_EQ(b.y, all[b.id].y);
  }
}

TEST(WorldTest, SeededRunsAreBitIdentical) {
  WorldSpec spec;
  spec.trajectory.duration = 4.0;
  spec.noise = NoiseSpec{1e-3, 1e-2, Vector3d::Constant(0.01), Vector3d::Constant(0.05), 0.002, 42};
  const auto a = generateWorld(spec), b = generateWorld(spec);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a[j].imu.omega, b[j].imu.omega);
    EXPECT_EQ(a[j].imu.accel, b[j].imu.accel);
    ASSERT_EQ(a[j].bearings.has_value(), b[j].bearings.has_value());
    if (!a[j].bearings) continue;
    ASSERT_EQ(a[j].bearings->size(), b[j].bearings->size());
    for (std::size_t i = 0; i < a[j].bearings->size(); ++i) EXPECT_EQ((*a[j].bearings)[i].y, (*b[j].bearings)[i].y);
  }
  spec.noise.seed = 43;
  const auto c = generateWorld(spec);
  EXPECT_NE(a[5].imu.omega, c[5].imu.omega);
}

TEST(WorldTest, BearingsRespectFieldOfView) {
  WorldSpec spec;
  spec.trajectory.kind = TrajectoryKind::FigureEight;
  spec.trajectory.duration = 20.0;
  spec.fovHalfAngle = 0.4;
  spec.noise.bearingSigma = 0.002;
  std::size_t emitted = 0, hidden = 0;
  for (const auto& s : generateWorld(spec)) {
    if (!s.bearings) continue;
    std::vector<bool> seen(s.truth.size(), false);
    for (const auto& b : *s.bearings) {
      seen[b.id] = true;
      EXPECT_TRUE(inFieldOfView(s.truth.cameraLandmark(b.id), spec.fovHalfAngle));
      EXPECT_NEAR(b.y.norm(), 1.0, 1e-12);
      ++emitted;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i]) continue;
      EXPECT_FALSE(inFieldOfView(s.truth.cameraLandmark(i), spec.fovHalfAngle));
      ++hidden;
    }
  }
  EXPECT_GT(emitted, 0u);
  EXPECT_GT(hidden, 0u);
}

TEST(WorldTest, BearingPerturbationIsGeodesic) {
  testing::Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Vector3d y = testing::randomVec<3>(rng).normalized();
    const double n1 = testing::uniform(rng, -0.1, 0.1), n2 = testing::uniform(rng, -0.1, 0.1);
    const Vector3d z = perturbBearing(y, n1, n2);
    EXPECT_NEAR(z.norm(), 1.0, 1e-12);
    EXPECT_NEAR(std::acos(std::clamp(y.dot(z), -1.0, 1.0)), std::hypot(n1, n2), 1e-9);
  }
}

TEST(WorldTest, FrameChangeMatchesAlpha) {
  testing::Rng rng(2);
  WorldSpec spec;
  spec.trajectory.duration = 2.0;
  spec.noise = NoiseSpec{1e-3, 1e-2, Vector3d::Constant(0.01), Vector3d::Constant(0.05), 0.002, 7};
  const auto base = generateWorld(spec);
  spec.frame = testing::randomSEe3(rng);
  const auto moved = generateWorld(spec);
  for (std::size_t j = 0; j < base.size(); ++j) {
    EXPECT_LT(testing::stateDistance(moved[j].truth, vislam::alpha(*spec.frame, base[j].truth)), 1e-12);
    EXPECT_LT((moved[j].imu.omega - base[j].imu.omega).norm(), 1e-12);
    EXPECT_LT((moved[j].imu.accel - base[j].imu.accel).norm(), 1e-12);
    if (!base[j].bearings) continue;
    ASSERT_EQ(moved[j].bearings->size(), base[j].bearings->size());
    EXPECT_LT(testing::bearingDistance(*moved[j].bearings, *base[j].bearings), 1e-12);
  }
}

TEST(ParticleTest, IntegratorMatchesConstantTwist) {
  const TrajectorySpec spec = specFor(TrajectoryKind::ConstantTwist);
  const TrajectoryPoint p0 = evaluate(spec, 0.0), p1 = evaluate(spec, 7.0);
  const lie::SE23 end = integrateNav(lie::SE23(p0.R, p0.x, p0.v), idealImu(p0, vislam::kGravity), 7.0, 700,
                                     vislam::kGravity);
  EXPECT_LT((end.x() - p1.x).norm(), 1e-8);
  EXPECT_LT((end.v() - p1.v).norm(), 1e-8);
  EXPECT_LT((end.R().matrix() - p1.R.matrix()).norm(), 1e-8);
}

TEST(ParticleTest, ZeroCovarianceCollapsesToNominal) {
  ParticleSpec spec;
  spec.sigma0.setZero();
  spec.count = 20;
  const ParticleCloud cloud = sampleParticles(spec);
  ASSERT_EQ(cloud.times, (std::vector<double>{0, 5, 10, 15}));
  for (std::size_t k = 0; k < cloud.times.size(); ++k) {
    for (const auto& p : cloud.particles[k]) EXPECT_EQ(p.matrix(), cloud.nominal[k].matrix());
  }
}

TEST(ParticleTest, InitialMeanWithinMonteCarloBound) {
  ParticleSpec spec;
  spec.horizon = 5.0;
  const ParticleCloud cloud = sampleParticles(spec);
  lie::Vector9d mean = lie::Vector9d::Zero();
  for (const auto& p : cloud.particles[0]) mean += p.log();
  mean /= static_cast<double>(spec.count);
  for (int i = 0; i < 9; ++i) {
    EXPECT_LT(std::abs(mean(i)), 3.0 * std::sqrt(spec.sigma0(i, i) / spec.count)) << i;
  }
}

TEST(ParticleTest, ParticlesIndependentOfCount) {
  ParticleSpec spec;
  spec.horizon = 5.0;
  spec.count = 10;
  const ParticleCloud a = sampleParticles(spec);
  spec.count = 30;
  const ParticleCloud b = sampleParticles(spec);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(a.particles[1][i].matrix(), b.particles[1][i].matrix());
}

TEST(BaselineTest, CoordinateRoundTrips) {
  testing::Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const lie::SE23 est = testing::randomSE23(rng), truth = testing::randomSE23(rng);
    const VectorXd e = ekfCoords(est, truth), m = mekfCoords(est, truth);
    EXPECT_EQ(e.size(), 10);
    EXPECT_EQ(m.size(), 9);
    EXPECT_LT((ekfCoordsInverse(est, e).matrix() - truth.matrix()).norm(), 1e-9);
    EXPECT_LT((mekfCoordsInverse(est, m).matrix() - truth.matrix()).norm(), 1e-9);
    EXPECT_LT(ekfCoords(truth, truth).norm(), 1e-15);
  }
}

TEST(BaselineTest, ZeroCovarianceStaysZero) {
  ParticleSpec spec;
  spec.sigma0.setZero();
  spec.input = vislam::ImuInput{};
  for (const auto& track : {ekfPropagate(spec), mekfPropagate(spec)}) {
    for (const auto& S : track.sigma) EXPECT_EQ(S.norm(), 0.0);
  }
  EXPECT_EQ(ekfPropagate(spec).sigma[0].rows(), 10);
  EXPECT_EQ(mekfPropagate(spec).sigma[0].rows(), 9);
}

TEST(BaselineTest, NominalMatchesParticleNominal) {
  ParticleSpec spec;
  spec.count = 1;
  const ParticleCloud cloud = sampleParticles(spec);
  const auto ekf = ekfPropagate(spec), mekf = mekfPropagate(spec);
  for (std::size_t k = 0; k < cloud.times.size(); ++k) {
    EXPECT_LT((ekf.estimate[k].matrix() - cloud.nominal[k].matrix()).norm(), 1e-7);
    EXPECT_LT((mekf.estimate[k].matrix() - cloud.nominal[k].matrix()).norm(), 1e-7);
  }
}

// With a tiny initial spread both baselines are accurate to first order.
TEST(BaselineTest, SmallSpreadCovarianceMatchesParticles) {
  ParticleSpec spec;
  spec.sigma0 *= 1e-6;
  spec.count = 4000;
  const ParticleCloud cloud = sampleParticles(spec);
  const auto ekf = ekfPropagate(spec), mekf = mekfPropagate(spec);
  const std::size_t k = cloud.times.size() - 1;
  std::vector<VectorXd> e, m;
  for (const auto& p : cloud.particles[k]) {
    e.push_back(ekfCoords(ekf.estimate[k], p));
    m.push_back(mekfCoords(mekf.estimate[k], p));
  }
  const MatrixXd Se = sampleCovariance(e), Sm = sampleCovariance(m);
  EXPECT_LT((Se - ekf.sigma[k]).norm() / ekf.sigma[k].norm(), 0.1);
  EXPECT_LT((Sm - mekf.sigma[k]).norm() / mekf.sigma[k].norm(), 0.1);
}

}  // namespace
}  // namespace eqvio::sim
