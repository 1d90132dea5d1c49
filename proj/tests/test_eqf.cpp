#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <cmath>

#include "eqvio/eqf/filter.hpp"
#include "eqvio/vislam/coords.hpp"
#include "test_support.hpp"

namespace eqvio::eqf {
namespace {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;
using testing::Rng;
using vislam::localCoords;
using vislam::localCoordsInverse;

// Filter whose estimate equals xi, with a random PD Riccati matrix.
FilterState filterAt(Rng& rng, const VisState& xi, const VisState& originNav) {
  FilterState fs;
  fs.origin = vislam::withOriginLandmarks(originNav, xi.ids());
  fs.X = vislam::transporter(fs.origin, xi);
  const int D = vislam::chartDim(xi.size());
  const MatrixXd L = testing::randomVecX(rng, D * D, 0.1).reshaped(D, D);
  fs.Sigma = L * L.transpose() + 0.01 * MatrixXd::Identity(D, D);
  return fs;
}

FilterState randomFilter(Rng& rng, std::size_t n) {
  return filterAt(rng, testing::randomState(rng, n), testing::randomState(rng, 0));
}

// Rate of change of the chart error when the truth is driven by uTrue and
// the observer by uHat, via central differences of both flows.
VectorXd errorRate(const FilterState& fs, const VectorXd& eps, const ImuInput& uTrue, const ImuInput& uHat,
                   double g, double h = 1e-5) {
  const std::vector<int> ids = fs.ids();
  const VisState xi = vislam::phi(fs.X, localCoordsInverse(eps, fs.origin));
  const VectorXd lamTrue = vislam::lift(xi, uTrue, g);
  const VectorXd lamHat = vislam::lift(stateEstimate(fs), uHat, g);
  auto at = [&](double t) {
    const VisState xt = vislam::phi(VisGroup::exp(t * lamTrue, ids), xi);
    const VisGroup Xt = fs.X * VisGroup::exp(t * lamHat, ids);
    return localCoords(vislam::phi(Xt.inverse(), xt), fs.origin);
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

MatrixXd stateMatrixFD(const FilterState& fs, const ImuInput& u, double g, const VectorXd& eps0,
                       double delta = 1e-4) {
  const int D = static_cast<int>(eps0.size());
  MatrixXd A(D, D);
  for (int j = 0; j < D; ++j) {
    VectorXd e = VectorXd::Zero(D);
    e(j) = delta;
    A.col(j) = (errorRate(fs, eps0 + e, u, u, g) - errorRate(fs, eps0 - e, u, u, g)) / (2.0 * delta);
  }
  return A;
}

double relativeError(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

bool isPositiveDefinite(const MatrixXd& S) { return Eigen::LLT<MatrixXd>(S).info() == Eigen::Success; }

TEST(FilterStateTest, IdentityObserverGivesOrigin) {
  Rng rng(1);
  const VisState origin = vislam::withOriginLandmarks(testing::randomState(rng, 3), testing::makeIds(3));
  FilterState fs;
  fs.origin = origin;
  fs.X = VisGroup::identity(origin.ids());
  EXPECT_LT(testing::stateDistance(stateEstimate(fs), origin), 1e-14);
}

TEST(FilterStateTest, TransporterObserverGivesTarget) {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const VisState xi = testing::randomState(rng, 4);
    const FilterState fs = randomFilter(rng, 4);
    const FilterState g = filterAt(rng, xi, fs.origin);
    EXPECT_LT(testing::stateDistance(stateEstimate(g), xi), 1e-9);
  }
}

TEST(FilterStateTest, OutputConsistentWithRho) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const FilterState fs = randomFilter(rng, 5);
    const auto lhs = vislam::measure(stateEstimate(fs));
    const auto rhs = vislam::rho(fs.X, vislam::measure(fs.origin));
    EXPECT_LT(testing::bearingDistance(lhs, rhs), 1e-12);
  }
}

TEST(StateMatrixTest, MatchesFiniteDifferences) {
  Rng rng(4);
  const double g = vislam::kGravity;
  for (int k = 0; k < 10; ++k) {
    const FilterState fs = randomFilter(rng, 3);
    const ImuInput u = testing::randomImu(rng);
    const MatrixXd A = stateMatrix(fs, u, g);
    const MatrixXd Afd = stateMatrixFD(fs, u, g, VectorXd::Zero(A.cols()));
    EXPECT_LT(relativeError(A, Afd), 1e-5) << "trial " << k;
  }
}

TEST(StateMatrixTest, LandmarkRowsDependOnCameraTwist) {
  Rng rng(5);
  const FilterState fs = randomFilter(rng, 2);
  ImuInput u = testing::randomImu(rng);
  const MatrixXd A0 = stateMatrix(fs, u, vislam::kGravity);
  u.omega += Vector3d(0.3, -0.2, 0.1);
  const MatrixXd A1 = stateMatrix(fs, u, vislam::kGravity);
  const MatrixXd A1fd = stateMatrixFD(fs, u, vislam::kGravity, VectorXd::Zero(A1.cols()));
  const int r = vislam::kChartLandmarks;
  EXPECT_GT((A1.middleRows(r, 6) - A0.middleRows(r, 6)).norm(), 1e-3);
  EXPECT_LT(relativeError(A1.middleRows(r, 6), A1fd.middleRows(r, 6)), 1e-5);
}

TEST(StateMatrixTest, NavigationErrorIsLogLinear) {
  Rng rng(6);
  VisState xi = testing::randomState(rng, 2);
  xi.bias.setZero();
  VisState originNav = testing::randomState(rng, 0);
  originNav.bias.setZero();
  const FilterState fs = filterAt(rng, xi, originNav);
  const ImuInput u = testing::randomImu(rng);
  const int D = vislam::chartDim(2);
  VectorXd eps1 = VectorXd::Zero(D);
  eps1.head<9>() = 0.1 * testing::randomVec<9>(rng).normalized();
  const MatrixXd A0 = stateMatrixFD(fs, u, vislam::kGravity, VectorXd::Zero(D), 1e-3);
  const MatrixXd A1 = stateMatrixFD(fs, u, vislam::kGravity, eps1, 1e-3);
  EXPECT_LT((A0.topLeftCorner<9, 9>() - A1.topLeftCorner<9, 9>()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(InputMatrixTest, MatchesFiniteDifferences) {
  Rng rng(7);
  const double g = vislam::kGravity;
  for (int k = 0; k < 10; ++k) {
    const FilterState fs = randomFilter(rng, 3);
    const ImuInput u = testing::randomImu(rng);
    const MatrixXd B = inputMatrix(fs);
    const int D = static_cast<int>(B.rows());
    MatrixXd Bfd(D, 6);
    const double delta = 1e-4;
    for (int j = 0; j < 6; ++j) {
      ImuInput up = u, um = u;
      if (j < 3) {
        up.omega(j) += delta;
        um.omega(j) -= delta;
      } else {
        up.accel(j - 3) += delta;
        um.accel(j - 3) -= delta;
      }
      const VectorXd z = VectorXd::Zero(D);
      Bfd.col(j) = (errorRate(fs, z, up, u, g) - errorRate(fs, z, um, u, g)) / (2.0 * delta);
    }
    EXPECT_LT(relativeError(B, Bfd), 1e-5) << "trial " << k;
  }
}

TEST(InputMatrixTest, IdentityStateNavigationRows) {
  Rng rng(8);
  FilterState fs = initialize(testing::randomState(rng, 0), GainConfig{});
  const MatrixXd B = inputMatrix(fs);
  MatrixXd expected = MatrixXd::Zero(9, 6);
  expected.block<3, 3>(0, 0).setIdentity();
  expected.block<3, 3>(6, 3).setIdentity();
  EXPECT_LT((B.topRows<9>() - expected).norm(), 1e-12);
}

// Ground-truth flow of the bias-free system, integrated with classical RK4 on
// the ambient coordinates (R, x, v); landmarks and extrinsics are constant.
struct NavOracle {
  Eigen::Matrix3d R;
  Vector3d x, v;
};

NavOracle rk4Step(const NavOracle& s, const ImuInput& ua, const ImuInput& ub, double dt, double g) {
  auto f = [g](const NavOracle& y, const ImuInput& u) {
    return NavOracle{y.R * lie::skew(u.omega), y.v, y.R * u.accel + g * Vector3d::UnitZ()};
  };
  auto add = [](const NavOracle& y, const NavOracle& d, double h) {
    return NavOracle{y.R + h * d.R, y.x + h * d.x, y.v + h * d.v};
  };
  const ImuInput um{0.5 * (ua.omega + ub.omega), 0.5 * (ua.accel + ub.accel)};
  const NavOracle k1 = f(s, ua);
  const NavOracle k2 = f(add(s, k1, dt / 2), um);
  const NavOracle k3 = f(add(s, k2, dt / 2), um);
  const NavOracle k4 = f(add(s, k3, dt), ub);
  return NavOracle{s.R + dt / 6 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R),
                   s.x + dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                   s.v + dt / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

ImuInput smoothInput(double t) {
  return {Vector3d(0.4 * std::sin(2.0 * t), 0.3 * std::cos(1.5 * t), 0.5 + 0.2 * std::sin(t)),
          Vector3d(1.0 * std::cos(3.0 * t), 0.5 * std::sin(2.0 * t), -9.81 + 0.3 * std::cos(t))};
}

// Maximum error over one second of propagation at the given IMU rate.
double propagationError(double rate) {
  Rng rng(9);
  VisState xi = testing::randomState(rng, 4);
  xi.bias.setZero();
  VisState originNav = testing::randomState(rng, 0);
  originNav.bias.setZero();
  FilterState fs = filterAt(rng, xi, originNav);
  const GainConfig gains;

  NavOracle truth{xi.pose.R().matrix(), xi.pose.x(), xi.velocity};
  const int steps = static_cast<int>(std::lround(rate));
  const double dt = 1.0 / rate;
  const int sub = 20;
  for (int k = 0; k < steps; ++k) {
    const ImuInput u0 = smoothInput(k * dt), u1 = smoothInput((k + 1) * dt);
    for (int j = 0; j < sub; ++j) {
      const double c0 = static_cast<double>(j) / sub, c1 = static_cast<double>(j + 1) / sub;
      const ImuInput ua{(1 - c0) * u0.omega + c0 * u1.omega, (1 - c0) * u0.accel + c0 * u1.accel};
      const ImuInput ub{(1 - c1) * u0.omega + c1 * u1.omega, (1 - c1) * u0.accel + c1 * u1.accel};
      truth = rk4Step(truth, ua, ub, dt / sub, gains.gravity);
    }
    fs = propagate(fs, u0, u1, dt, gains);
  }
  const VisState est = stateEstimate(fs);
  double err = (est.pose.R().matrix() - truth.R).cwiseAbs().maxCoeff();
  err = std::max(err, (est.pose.x() - truth.x).cwiseAbs().maxCoeff());
  err = std::max(err, (est.velocity - truth.v).cwiseAbs().maxCoeff());
  err = std::max(err, (est.extrinsics.matrix() - xi.extrinsics.matrix()).cwiseAbs().maxCoeff());
  err = std::max(err, est.bias.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    err = std::max(err, (est.landmarks[i].p - xi.landmarks[i].p).cwiseAbs().maxCoeff());
  }
  return err;
}

TEST(PropagateTest, ZeroStepIsIdentity) {
  Rng rng(10);
  const FilterState fs = randomFilter(rng, 3);
  const FilterState out = propagate(fs, testing::randomImu(rng), 0.0, GainConfig{});
  EXPECT_EQ((out.Sigma - fs.Sigma).norm(), 0.0);
  EXPECT_EQ(testing::stateDistance(stateEstimate(out), stateEstimate(fs)), 0.0);
}

TEST(PropagateTest, MatchesGroundTruthFlowOverOneSecond) {
  const double err = propagationError(200.0);
  RecordProperty("max_error", std::to_string(err));
  EXPECT_LT(err, 1e-6);
}

TEST(PropagateTest, IntegratorIsFourthOrder) {
  const double coarse = propagationError(25.0);
  const double fine = propagationError(50.0);
  RecordProperty("ratio", std::to_string(coarse / fine));
  EXPECT_GT(coarse / fine, 12.0) << coarse << " " << fine;
}

TEST(PropagateTest, TraceGrowsWithoutUpdates) {
  Rng rng(11);
  FilterState fs = randomFilter(rng, 3);
  const GainConfig gains;
  for (int k = 0; k < 100; ++k) {
    const double before = fs.Sigma.trace();
    fs = propagate(fs, ImuInput{Vector3d::Zero(), Vector3d(0, 0, -gains.gravity)}, 0.005, gains);
    EXPECT_GT(fs.Sigma.trace(), before);
  }
}

TEST(OutputMatrixTest, OnAxisBearingGivesCrossProductBlock) {
  Rng rng(12);
  FilterState fs = randomFilter(rng, 2);
  for (auto& q : fs.X.Q) q.Q = lie::SOT3(lie::SO3(), q.Q.c());
  const BearingSet y{{fs.X.Q[1].id, Vector3d::UnitZ()}};
  const MatrixXd C = outputMatrix(fs, y);
  MatrixXd expected = MatrixXd::Zero(2, C.cols());
  expected(0, vislam::kChartLandmarks + 4) = -1.0;
  expected(1, vislam::kChartLandmarks + 3) = 1.0;
  EXPECT_EQ((C - expected).norm(), 0.0);
}

TEST(OutputMatrixTest, UnknownIdThrows) {
  Rng rng(13);
  const FilterState fs = randomFilter(rng, 2);
  EXPECT_THROW(outputMatrix(fs, {{999, Vector3d::UnitZ()}}), vislam::IdMismatchError);
}

TEST(UpdateTest, ZeroResidualKeepsStateAndShrinksSigma) {
  Rng rng(14);
  const FilterState fs = randomFilter(rng, 4);
  const GainConfig gains;
  const FilterState out = update(fs, vislam::measure(stateEstimate(fs)), gains);
  EXPECT_LT((out.X.matrix() - fs.X.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(out.Sigma.trace(), fs.Sigma.trace());
  EXPECT_TRUE(isPositiveDefinite(out.Sigma));
  EXPECT_LT((out.Sigma - out.Sigma.transpose()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(UpdateTest, SingleLandmarkConvergesToTrueBearing) {
  Rng rng(15);
  VisState truth = testing::randomState(rng, 1);
  const Vector3d qTrue = truth.cameraLandmark(0);
  VisState start = truth;
  const Vector3d qStart = 1.7 * (lie::SO3::exp(Vector3d(0.02, -0.03, 0.01)).matrix() * qTrue);
  start.landmarks[0].p = start.cameraPose() * qStart;
  FilterState fs = filterAt(rng, start, testing::randomState(rng, 0));
  GainConfig gains;
  gains.outlierGate = 1e9;
  const BearingSet y = vislam::measure(truth);
  auto angle = [&](const FilterState& f) {
    const Vector3d q = stateEstimate(f).cameraLandmark(0);
    return std::acos(std::clamp(q.normalized().dot(qTrue.normalized()), -1.0, 1.0));
  };
  const double initial = angle(fs);
  double previous = initial;
  for (int k = 0; k < 20; ++k) {
    fs = update(fs, y, gains);
    const double now = angle(fs);
    EXPECT_LE(now, previous + 1e-12);
    previous = now;
  }
  EXPECT_LT(previous, 1e-3 * initial);
}

TEST(UpdateTest, GateRejectsOutliers) {
  Rng rng(16);
  const FilterState fs = randomFilter(rng, 3);
  GainConfig gains;
  BearingSet y = vislam::measure(stateEstimate(fs));
  y[1].y = lie::SO3::exp(Vector3d(0.4, 0.2, 0.0)).matrix() * y[1].y;
  UpdateReport report;
  const FilterState tight = [&] {
    FilterState f = fs;
    f.Sigma = 1e-6 * MatrixXd::Identity(f.Sigma.rows(), f.Sigma.cols());
    return f;
  }();
  update(tight, y, gains, &report);
  ASSERT_EQ(report.rejected.size(), 1u);
  EXPECT_EQ(report.rejected[0], y[1].id);
  EXPECT_EQ(report.used.size(), 2u);
  EXPECT_EQ(report.innovation.size(), 4);
}

TEST(UpdateTest, UnobservableInformationUnchangedByConsistentUpdate) {
  Rng rng(17);
  const FilterState fs = randomFilter(rng, 4);
  const VisState xh = stateEstimate(fs);
  const FilterState out = update(fs, vislam::measure(xh), GainConfig{});
  const MatrixXd info0 = fs.Sigma.inverse();
  const MatrixXd info1 = out.Sigma.inverse();
  const VisGroup Xinv = fs.X.inverse();
  const double h = 1e-6;
  for (int k = 0; k < 4; ++k) {
    auto chart = [&](double t) {
      const double yaw = k == 0 ? t : 0.0;
      const Vector3d shift = k == 0 ? Vector3d::Zero() : Vector3d(t * (k == 1), t * (k == 2), t * (k == 3));
      const VisState moved = vislam::alpha(lie::SEe3(yaw, shift), xh);
      return localCoords(vislam::phi(Xinv, moved), fs.origin);
    };
    const VectorXd d = (chart(h) - chart(-h)) / (2 * h);
    const double before = d.dot(info0 * d), after = d.dot(info1 * d);
    EXPECT_LE(after, before * (1 + 1e-8) + 1e-8) << "direction " << k;
    EXPECT_NEAR(after, before, 1e-8 * std::max(1.0, before)) << "direction " << k;
  }
}

TEST(UpdateTest, PositiveDefiniteOverManyCycles) {
  Rng rng(18);
  VisState truth = testing::randomState(rng, 0);
  truth.velocity.setZero();
  truth.bias.setZero();
  const lie::SE3 cam = truth.cameraPose();
  for (int id : testing::makeIds(6)) {
    const Vector3d q(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1), testing::uniform(rng, 2, 6));
    truth.landmarks.push_back({id, cam * q});
  }
  GainConfig gains;
  FilterState fs = initialize(truth, gains);
  const ImuInput hover{Vector3d::Zero(), -gains.gravity * (truth.pose.R().matrix().transpose() * Vector3d::UnitZ())};
  std::normal_distribution<double> noise(0.0, std::sqrt(gains.bearingNoise));
  for (int k = 0; k < 10000; ++k) {
    fs = propagate(fs, hover, 0.005, gains);
    BearingSet y = vislam::measure(truth);
    for (auto& b : y) b.y = (b.y + Vector3d(noise(rng), noise(rng), noise(rng))).normalized();
    fs = processFrame(fs, y, gains);
    ASSERT_TRUE(isPositiveDefinite(fs.Sigma)) << "cycle " << k;
    ASSERT_LT((fs.Sigma - fs.Sigma.transpose()).cwiseAbs().maxCoeff(), 1e-9) << "cycle " << k;
  }
  EXPECT_EQ(fs.size(), 6u);
}

TEST(LandmarkTest, AddedLandmarkPredictsItsBearing) {
  Rng rng(19);
  const FilterState fs = randomFilter(rng, 2);
  const Vector3d y0 = testing::randomVec<3>(rng).normalized();
  const FilterState out = addLandmark(fs, 500, y0, 2.5, GainConfig{});
  const VisState xh = stateEstimate(out);
  EXPECT_LT((xh.cameraLandmark(2) - 2.5 * y0).norm(), 1e-9);
  EXPECT_LT((vislam::measure(xh)[2].y - y0).norm(), 1e-9);
  EXPECT_EQ(out.Sigma.rows(), fs.Sigma.rows() + 3);
  EXPECT_EQ(out.Sigma.topLeftCorner(fs.Sigma.rows(), fs.Sigma.cols()), fs.Sigma);
}

TEST(LandmarkTest, AddThenRemoveRestores) {
  Rng rng(20);
  const FilterState fs = randomFilter(rng, 3);
  const FilterState out = removeLandmark(addLandmark(fs, 77, Vector3d::UnitZ(), 1.0, GainConfig{}), 77);
  EXPECT_EQ(out.ids(), fs.ids());
  EXPECT_EQ(out.Sigma, fs.Sigma);
  EXPECT_EQ(out.origin.ids(), fs.origin.ids());
}

TEST(LandmarkTest, RemoveMiddleExcisesBlock) {
  Rng rng(21);
  const FilterState fs = randomFilter(rng, 3);
  const FilterState out = removeLandmark(fs, fs.ids()[1]);
  const int r = vislam::kChartLandmarks;
  EXPECT_EQ(out.Sigma.topLeftCorner(r + 3, r + 3), fs.Sigma.topLeftCorner(r + 3, r + 3));
  EXPECT_EQ(out.Sigma.bottomRightCorner(3, 3), fs.Sigma.bottomRightCorner(3, 3));
  EXPECT_EQ(out.Sigma.block(0, r + 3, 3, 3), fs.Sigma.block(0, r + 6, 3, 3));
  EXPECT_LT(testing::stateDistance(stateEstimate(out), [&] {
    VisState x = stateEstimate(fs);
    x.landmarks.erase(x.landmarks.begin() + 1);
    return x;
  }()), 1e-12);
}

TEST(LandmarkTest, MissingOrDuplicateIdThrows) {
  Rng rng(22);
  const FilterState fs = randomFilter(rng, 2);
  EXPECT_THROW(removeLandmark(fs, 12345), vislam::IdMismatchError);
  EXPECT_THROW(addLandmark(fs, fs.ids()[0], Vector3d::UnitZ(), 1.0, GainConfig{}), vislam::IdMismatchError);
}

TEST(ProcessFrameTest, LifecycleAndCap) {
  Rng rng(23);
  GainConfig gains;
  gains.maxLandmarks = 4;
  FilterState fs = initialize(testing::randomState(rng, 0), gains);
  BearingSet y;
  for (int id = 1; id <= 6; ++id) y.push_back({id, Vector3d(0.1 * id, 0.0, 1.0).normalized()});
  FrameReport report;
  fs = processFrame(fs, y, gains, &report);
  EXPECT_EQ(report.added, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(fs.size(), 4u);
  y.erase(y.begin());
  fs = processFrame(fs, y, gains, &report);
  EXPECT_EQ(report.removed, std::vector<int>{1});
  EXPECT_EQ(report.update.used, (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(report.added, std::vector<int>{5});
  EXPECT_EQ(fs.ids(), (std::vector<int>{2, 3, 4, 5}));
}

TEST(ProcessFrameTest, NewLandmarksUseMedianDepth) {
  Rng rng(24);
  GainConfig gains;
  FilterState fs = initialize(testing::randomState(rng, 0), gains);
  EXPECT_DOUBLE_EQ(medianDepth(fs, 1.0), 1.0);
  fs = addLandmark(fs, 1, Vector3d::UnitZ(), 2.0, gains);
  fs = addLandmark(fs, 2, Vector3d::UnitZ(), 4.0, gains);
  fs = addLandmark(fs, 3, Vector3d::UnitZ(), 9.0, gains);
  EXPECT_NEAR(medianDepth(fs, 1.0), 4.0, 1e-12);
}

}  // namespace
}  // namespace eqvio::eqf
