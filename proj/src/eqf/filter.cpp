#include "eqvio/eqf/filter.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "eqvio/lie/so3.hpp"

namespace eqvio::eqf {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;
using lie::Matrix6d;
using lie::Matrix9d;
using lie::skew;
using vislam::chartDim;
using vislam::kAlgB;
using vislam::kChartBias;
using vislam::kChartExt;
using vislam::kChartLandmarks;
using vislam::kChartNav;

namespace {

using Matrix34d = Eigen::Matrix<double, 3, 4>;
using Matrix43d = Eigen::Matrix<double, 4, 3>;
using Matrix46d = Eigen::Matrix<double, 4, 6>;
using Matrix69d = Eigen::Matrix<double, 6, 9>;
using Matrix96d = Eigen::Matrix<double, 9, 6>;

int landmarkRow(std::size_t i) { return kChartLandmarks + 3 * static_cast<int>(i); }

// Polar chart of Ad_Q on an SOT(3) algebra vector, third rotation entry dropped.
Matrix34d chartAdjoint(const lie::SOT3& Q) {
  Matrix34d m = Matrix34d::Zero();
  m.block<2, 3>(0, 0) = Q.R().matrix().topRows<2>();
  m(2, 3) = 1.0;
  return m;
}

// Ad_{Q^-1} composed with the chart embedding.
Matrix43d chartAdjointInverse(const lie::SOT3& Q) {
  Matrix43d m = Matrix43d::Zero();
  m.block<3, 2>(0, 0) = Q.R().matrix().transpose().leftCols<2>();
  m(3, 2) = 1.0;
  return m;
}

// Sensitivity of the landmark lift to the camera-frame point.
Matrix43d liftPointJacobian(const Vector3d& q, const Vector3d& vC) {
  const double q2 = q.squaredNorm();
  const double q4 = q2 * q2;
  Matrix43d G;
  G.topRows<3>() = -skew(vC) / q2 - 2.0 * q.cross(vC) * q.transpose() / q4;
  G.bottomRows<1>() = vC.transpose() / q2 - 2.0 * q.dot(vC) * q.transpose() / q4;
  return G;
}

// Sensitivity of the landmark lift to the camera twist (Omega_C, v_C).
Matrix46d liftTwistJacobian(const Vector3d& q) {
  const double q2 = q.squaredNorm();
  Matrix46d G = Matrix46d::Zero();
  G.block<3, 3>(0, 0).setIdentity();
  G.block<3, 3>(0, 3) = skew(q) / q2;
  G.block<1, 3>(3, 3) = q.transpose() / q2;
  return G;
}

MatrixXd processNoise(const GainConfig& gains, std::size_t n) {
  VectorXd d(chartDim(n));
  d << gains.processNav, gains.processBias, gains.processExt;
  for (std::size_t i = 0; i < n; ++i) d.segment<3>(landmarkRow(i)) = gains.processLandmark;
  return d.asDiagonal();
}

ImuInput interpolate(const ImuInput& u0, const ImuInput& u1, double c) {
  return {(1.0 - c) * u0.omega + c * u1.omega, (1.0 - c) * u0.accel + c * u1.accel};
}

VectorXd liftAt(const VisGroup& X, const VisState& origin, const ImuInput& u, double g) {
  return vislam::lift(vislam::phi(X, origin), u, g);
}

// A * M for A with the sparsity of the state matrix: the first 21 rows use
// the first 21 columns, and each landmark row block additionally uses its own
// diagonal block.
MatrixXd structuredProduct(const MatrixXd& A, const MatrixXd& M) {
  const int k = kChartLandmarks;
  MatrixXd out(A.rows(), M.cols());
  out.noalias() = A.leftCols(k) * M.topRows(k);
  for (int r = k; r < A.rows(); r += 3) {
    out.middleRows(r, 3).noalias() += A.block(r, r, 3, 3) * M.middleRows(r, 3);
  }
  return out;
}

MatrixXd symmetrize(const MatrixXd& S) { return 0.5 * (S + S.transpose()); }

MatrixXd removeBlock(const MatrixXd& S, int start, int len) {
  const int D = static_cast<int>(S.rows());
  const int tail = D - start - len;
  MatrixXd out(D - len, D - len);
  out.topLeftCorner(start, start) = S.topLeftCorner(start, start);
  out.topRightCorner(start, tail) = S.topRightCorner(start, tail);
  out.bottomLeftCorner(tail, start) = S.bottomLeftCorner(tail, start);
  out.bottomRightCorner(tail, tail) = S.bottomRightCorner(tail, tail);
  return out;
}

}  // namespace

int FilterState::indexOf(int id) const {
  for (std::size_t i = 0; i < X.Q.size(); ++i) {
    if (X.Q[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

FilterState initialize(const VisState& origin, const GainConfig& gains, double time) {
  FilterState fs;
  fs.origin = vislam::withOriginLandmarks(origin, {});
  fs.X = VisGroup::identity({});
  VectorXd d(chartDim(0));
  d << gains.sigma0Nav, gains.sigma0Bias, gains.sigma0Ext;
  fs.Sigma = d.asDiagonal();
  fs.time = time;
  return fs;
}

VisState stateEstimate(const FilterState& fs) { return vislam::phi(fs.X, fs.origin); }

MatrixXd stateMatrix(const FilterState& fs, const ImuInput& u, double gravity) {
  const VisState xh = stateEstimate(fs);
  const std::size_t n = fs.size();
  const VectorXd lam = vislam::lift(xh, u, gravity);
  const Matrix3d I = Matrix3d::Identity();

  const Vector3d nu = lam.segment<3>(3);
  const Vector3d gBody = gravity * xh.pose.R().matrix().transpose() * Vector3d::UnitZ();
  const Vector6d uB = lam.segment<6>(kAlgB);
  const Matrix6d P = xh.extrinsics.inverse().Adjoint();
  const Matrix6d adB = lie::SE3::ad(uB);

  // Derivative of the lift along the right-translated algebra directions.
  Matrix9d JAA = Matrix9d::Zero();
  JAA.block<3, 3>(3, 0) = skew(nu);
  JAA.block<3, 3>(3, 6) = I;
  JAA.block<3, 3>(6, 0) = skew(gBody);
  Matrix96d JAb = Matrix96d::Zero();
  JAb.block<3, 3>(0, 0) = -I;
  JAb.block<3, 3>(6, 3) = -I;
  Matrix69d EA = Matrix69d::Zero();
  EA.leftCols<6>().setIdentity();
  const Matrix69d JBA = -adB * P * EA + P * JAA.topRows<6>();
  const Matrix6d JBb = P * JAb.topRows<6>();

  const Matrix9d AdA = fs.X.A.Adjoint();
  const Matrix9d AdAinv = fs.X.A.inverse().Adjoint();
  const Matrix6d AdB = fs.X.B.Adjoint();
  const Matrix6d AdBinv = fs.X.B.inverse().Adjoint();

  MatrixXd A = MatrixXd::Zero(chartDim(n), chartDim(n));
  A.block<9, 9>(kChartNav, kChartNav) = AdA * JAA * AdAinv;
  A.block<9, 6>(kChartNav, kChartBias) = AdA * JAb;
  const Matrix69d BnavBlock = JBA * AdAinv;
  const Matrix6d BextBlock = adB * AdBinv;
  A.block<6, 9>(kChartExt, kChartNav) = AdB * BnavBlock;
  A.block<6, 6>(kChartExt, kChartBias) = AdB * JBb;
  A.block<6, 6>(kChartExt, kChartExt) = AdB * BextBlock;

  for (std::size_t i = 0; i < n; ++i) {
    const Vector3d q = xh.cameraLandmark(i);
    const lie::SOT3& Q = fs.X.Q[i].Q;
    const int r = landmarkRow(i);
    const Eigen::Matrix<double, 3, 6> MAdG = chartAdjoint(Q) * liftTwistJacobian(q);
    Matrix34d dq;
    dq << skew(q), -q;
    A.block<3, 9>(r, kChartNav) = MAdG * BnavBlock;
    A.block<3, 6>(r, kChartBias) = MAdG * JBb;
    A.block<3, 6>(r, kChartExt) = MAdG * BextBlock;
    A.block<3, 3>(r, r) =
        chartAdjoint(Q) * liftPointJacobian(q, uB.tail<3>()) * dq * chartAdjointInverse(Q);
  }
  return A;
}

MatrixXd inputMatrix(const FilterState& fs) {
  const VisState xh = stateEstimate(fs);
  const std::size_t n = fs.size();
  const Matrix3d I = Matrix3d::Identity();

  Matrix96d DA = Matrix96d::Zero();
  DA.block<3, 3>(0, 0) = I;
  DA.block<3, 3>(6, 3) = I;
  Matrix6d DB = Matrix6d::Zero();
  DB.leftCols<3>() = xh.extrinsics.inverse().Adjoint().leftCols<3>();

  MatrixXd B = MatrixXd::Zero(chartDim(n), 6);
  B.block<9, 6>(kChartNav, 0) = fs.X.A.Adjoint() * DA;
  B.block<6, 6>(kChartExt, 0) = fs.X.B.Adjoint() * DB;
  for (std::size_t i = 0; i < n; ++i) {
    B.block<3, 6>(landmarkRow(i), 0) =
        chartAdjoint(fs.X.Q[i].Q) * liftTwistJacobian(xh.cameraLandmark(i)) * DB;
  }
  return B;
}

MatrixXd outputMatrix(const FilterState& fs, const BearingSet& y) {
  MatrixXd C = MatrixXd::Zero(2 * static_cast<int>(y.size()), chartDim(fs.size()));
  for (std::size_t j = 0; j < y.size(); ++j) {
    const int i = fs.indexOf(y[j].id);
    if (i < 0) throw vislam::IdMismatchError("bearing id " + std::to_string(y[j].id) + " is not tracked");
    const Vector3d yt = fs.X.Q[i].Q.R().matrix() * y[j].y;
    const double w = 0.5 * (yt.z() + 1.0);
    const int c = landmarkRow(i);
    const int r = 2 * static_cast<int>(j);
    C(r, c + 1) = -w;
    C(r + 1, c) = w;
  }
  return C;
}

VectorXd bearingResidual(const FilterState& fs, const BearingSet& y) {
  VectorXd r(2 * y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const int i = fs.indexOf(y[j].id);
    if (i < 0) throw vislam::IdMismatchError("bearing id " + std::to_string(y[j].id) + " is not tracked");
    r.segment<2>(2 * j) = (fs.X.Q[i].Q.R().matrix() * y[j].y).head<2>();
  }
  return r;
}

FilterState propagate(const FilterState& fs, const ImuInput& u, double dt, const GainConfig& gains) {
  return propagate(fs, u, u, dt, gains);
}

FilterState propagate(const FilterState& fs, const ImuInput& u0, const ImuInput& u1, double dt,
                      const GainConfig& gains) {
  if (!(dt >= 0.0)) throw std::invalid_argument("propagation step must be non-negative");
  FilterState out = fs;
  if (dt == 0.0) return out;
  const std::vector<int> ids = fs.ids();
  const double g = gains.gravity;
  const ImuInput uMid = interpolate(u0, u1, 0.5);

  // Fourth-order commutator-free integration of X_dot = X Lambda(phi(X, origin), u).
  const VisGroup& X = fs.X;
  const VectorXd F1 = dt * liftAt(X, fs.origin, u0, g);
  const VisGroup Y2 = X * VisGroup::exp(0.5 * F1, ids);
  const VectorXd F2 = dt * liftAt(Y2, fs.origin, uMid, g);
  const VisGroup Y3 = X * VisGroup::exp(0.5 * F2, ids);
  const VectorXd F3 = dt * liftAt(Y3, fs.origin, uMid, g);
  const VisGroup Y4 = Y2 * VisGroup::exp(F3 - 0.5 * F1, ids);
  const VectorXd F4 = dt * liftAt(Y4, fs.origin, u1, g);
  const VectorXd G1 = 0.25 * F1 + (F2 + F3) / 6.0 - F4 / 12.0;
  const VectorXd G2 = -F1 / 12.0 + (F2 + F3) / 6.0 + 0.25 * F4;
  out.X = X * VisGroup::exp(G1, ids) * VisGroup::exp(G2, ids);

  const MatrixXd A = stateMatrix(fs, uMid, g);
  const MatrixXd B = inputMatrix(fs);
  // Transition matrix truncated after the second-order term.
  const MatrixXd At = dt * A;
  auto applyPhi = [&At](const MatrixXd& M) {
    const MatrixXd AM = structuredProduct(At, M);
    return MatrixXd(M + AM + 0.5 * structuredProduct(At, AM));
  };
  const MatrixXd PhiSigma = applyPhi(fs.Sigma);
  MatrixXd S = applyPhi(PhiSigma.transpose()).transpose();
  S += dt * (processNoise(gains, fs.size()) + B * gains.inputNoise.asDiagonal() * B.transpose());
  out.Sigma = symmetrize(S);
  out.time = fs.time + dt;
  checkFinite(out);
  return out;
}

FilterState update(const FilterState& fs, const BearingSet& y, const GainConfig& gains,
                   UpdateReport* report) {
  BearingSet tracked;
  for (const auto& b : y) {
    if (fs.indexOf(b.id) >= 0) tracked.push_back(b);
  }
  const double noise = gains.bearingNoise;

  // Per-landmark Mahalanobis gate on the 2-D residual.
  BearingSet used;
  std::vector<int> rejected;
  {
    const MatrixXd C = outputMatrix(fs, tracked);
    const VectorXd r = bearingResidual(fs, tracked);
    for (std::size_t j = 0; j < tracked.size(); ++j) {
      const auto Cj = C.middleRows(2 * j, 2);
      const Eigen::Matrix2d Sj = Cj * fs.Sigma * Cj.transpose() + noise * Eigen::Matrix2d::Identity();
      const Eigen::Vector2d rj = r.segment<2>(2 * j);
      const double d2 = rj.dot(Sj.ldlt().solve(rj));
      if (std::isfinite(d2) && d2 <= gains.outlierGate * gains.outlierGate) {
        used.push_back(tracked[j]);
      } else {
        rejected.push_back(tracked[j].id);
      }
    }
  }

  FilterState out = fs;
  VectorXd r = bearingResidual(fs, used);
  if (report) {
    report->used.clear();
    for (const auto& b : used) report->used.push_back(b.id);
    report->rejected = rejected;
    report->innovation = r;
  }
  if (used.empty()) return out;

  const MatrixXd C = outputMatrix(fs, used);
  const MatrixXd CSigma = C * fs.Sigma;
  MatrixXd S = CSigma * C.transpose();
  S.diagonal().array() += noise;
  const Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw FilterDivergence("innovation covariance is not positive definite");
  const MatrixXd K = llt.solve(CSigma).transpose();

  const VectorXd delta = K * r;
  const VectorXd Delta = vislam::originActionDifferential(fs.size()).transpose() * delta;
  out.X = VisGroup::exp(Delta, fs.ids()) * fs.X;
  out.Sigma = symmetrize(fs.Sigma - K * CSigma);
  checkFinite(out);
  if (Eigen::LLT<MatrixXd>(out.Sigma).info() != Eigen::Success) {
    throw FilterDivergence("Riccati matrix lost positive definiteness");
  }
  return out;
}

FilterState addLandmark(const FilterState& fs, int id, const Vector3d& bearing, double depth,
                        const GainConfig& gains) {
  if (fs.indexOf(id) >= 0) throw vislam::IdMismatchError("landmark " + std::to_string(id) + " already tracked");
  if (!(depth > 0.0)) throw std::invalid_argument("landmark depth must be positive");
  FilterState out = fs;
  out.X.Q.push_back({id, vislam::landmarkTransporter(Vector3d::UnitZ(), depth * bearing.normalized())});
  out.origin.landmarks.push_back({id, fs.origin.cameraPose() * Vector3d::UnitZ()});
  const int D = static_cast<int>(fs.Sigma.rows());
  out.Sigma = MatrixXd::Zero(D + 3, D + 3);
  out.Sigma.topLeftCorner(D, D) = fs.Sigma;
  out.Sigma.bottomRightCorner<3, 3>() = gains.sigma0Landmark.asDiagonal();
  return out;
}

FilterState removeLandmark(const FilterState& fs, int id) {
  const int i = fs.indexOf(id);
  if (i < 0) throw vislam::IdMismatchError("landmark " + std::to_string(id) + " is not tracked");
  FilterState out = fs;
  out.X.Q.erase(out.X.Q.begin() + i);
  out.origin.landmarks.erase(out.origin.landmarks.begin() + i);
  out.Sigma = removeBlock(fs.Sigma, landmarkRow(i), 3);
  return out;
}

double medianDepth(const FilterState& fs, double fallback) {
  if (fs.size() == 0) return fallback;
  const VisState xh = stateEstimate(fs);
  std::vector<double> d;
  for (std::size_t i = 0; i < xh.size(); ++i) d.push_back(xh.cameraLandmark(i).norm());
  const auto mid = d.begin() + d.size() / 2;
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

FilterState processFrame(const FilterState& fs, const BearingSet& y, const GainConfig& gains,
                         FrameReport* report) {
  FrameReport local;
  FrameReport& rep = report ? *report : local;
  rep = FrameReport{};

  FilterState out = fs;
  for (int id : fs.ids()) {
    const bool seen = std::any_of(y.begin(), y.end(), [id](const auto& b) { return b.id == id; });
    if (!seen) {
      out = removeLandmark(out, id);
      rep.removed.push_back(id);
    }
  }
  out = update(out, y, gains, &rep.update);

  const double depth = medianDepth(out, gains.defaultDepth);
  for (const auto& b : y) {
    if (out.size() >= gains.maxLandmarks) break;
    if (out.indexOf(b.id) >= 0) continue;
    out = addLandmark(out, b.id, b.y, depth, gains);
    rep.added.push_back(b.id);
  }
  return out;
}

void checkFinite(const FilterState& fs) {
  if (!fs.Sigma.allFinite()) throw FilterDivergence("Riccati matrix is not finite");
  if (!fs.X.matrix().allFinite()) throw FilterDivergence("observer state is not finite");
}

}  // namespace eqvio::eqf
