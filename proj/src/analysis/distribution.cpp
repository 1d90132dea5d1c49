#include "eqvio/analysis/distribution.hpp"

#include <Eigen/SVD>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "eqvio/eqf/filter.hpp"
#include "eqvio/sim/baselines.hpp"

namespace eqvio::analysis {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using lie::SE23;

std::string coordinatesName(ErrorCoordinates c) {
  switch (c) {
    case ErrorCoordinates::EqF:
      return "eqf";
    case ErrorCoordinates::EKF:
      return "ekf";
    case ErrorCoordinates::MEKF:
      return "mekf";
  }
  return "";
}

VectorXd eqfCoords(const SE23& estimate, const SE23& truth) { return (truth * estimate.inverse()).log(); }

SE23 eqfCoordsInverse(const SE23& estimate, const VectorXd& eps) {
  return SE23::exp(lie::Vector9d(eps)) * estimate;
}

namespace {

VectorXd coords(ErrorCoordinates c, const SE23& estimate, const SE23& truth) {
  switch (c) {
    case ErrorCoordinates::EqF:
      return eqfCoords(estimate, truth);
    case ErrorCoordinates::EKF:
      return sim::ekfCoords(estimate, truth);
    case ErrorCoordinates::MEKF:
      return sim::mekfCoords(estimate, truth);
  }
  throw std::invalid_argument("unknown coordinates");
}

SE23 coordsInverse(ErrorCoordinates c, const SE23& estimate, const VectorXd& eps) {
  switch (c) {
    case ErrorCoordinates::EqF:
      return eqfCoordsInverse(estimate, eps);
    case ErrorCoordinates::EKF:
      return sim::ekfCoordsInverse(estimate, eps);
    case ErrorCoordinates::MEKF:
      return sim::mekfCoordsInverse(estimate, eps);
  }
  throw std::invalid_argument("unknown coordinates");
}

MatrixXd sampleCovariance(const MatrixXd& X) {
  const MatrixXd C = X.rowwise() - X.colwise().mean();
  return C.transpose() * C / static_cast<double>(X.rows() - 1);
}

}  // namespace

SkewnessTest mardiaSkewness(const MatrixXd& samples, double confidence) {
  const Eigen::Index n = samples.rows();
  if (n < 2) throw std::invalid_argument("skewness needs at least 2 samples");
  // Whitening through the singular vectors of the centred data keeps strongly
  // anisotropic clouds well conditioned.
  const MatrixXd C = samples.rowwise() - samples.colwise().mean();
  Eigen::BDCSVD<MatrixXd> svd(C, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index d = 0;
  while (d < sv.size() && sv(d) > 1e-9 * sv(0)) ++d;
  const MatrixXd Z = std::sqrt(static_cast<double>(n)) * svd.matrixU().leftCols(d);
  const MatrixXd G = Z * Z.transpose();

  SkewnessTest out;
  out.b1 = G.array().cube().sum() / static_cast<double>(n * n);
  out.statistic = static_cast<double>(n) * out.b1 / 6.0;
  const double dof = static_cast<double>(d * (d + 1) * (d + 2)) / 6.0;
  out.bound = boost::math::quantile(boost::math::chi_squared(dof), confidence);
  out.gaussian = out.statistic <= out.bound;
  return out;
}

const DistributionRow& DistributionReport::row(ErrorCoordinates c, double time) const {
  for (const auto& r : rows) {
    if (r.filter == c && std::abs(r.time - time) < 1e-9) return r;
  }
  throw std::out_of_range("no distribution row for the requested filter and time");
}

std::vector<MatrixXd> eqfCovarianceTrack(const sim::ParticleSpec& spec, const std::vector<SE23>& nominal,
                                         int substeps) {
  if (substeps < 1) throw std::invalid_argument("substeps must be positive");
  vislam::VisState origin;
  eqf::FilterState fs = eqf::initialize(origin, eqf::GainConfig{}, 0.0);

  const std::vector<double> times = sim::snapshotTimes(spec);
  std::vector<MatrixXd> out;
  MatrixXd Sigma = spec.sigma0;
  out.push_back(Sigma);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = (times[k] - times[k - 1]) / substeps;
    SE23 A = nominal[k - 1];
    for (int s = 0; s < substeps; ++s) {
      fs.X.A = sim::integrateNav(A, spec.input, 0.5 * dt, 1, spec.gravity);
      const MatrixXd Anav = eqf::stateMatrix(fs, spec.input, spec.gravity).topLeftCorner(9, 9);
      const MatrixXd Phi = (dt * Anav).exp();
      Sigma = Phi * Sigma * Phi.transpose();
      A = sim::integrateNav(A, spec.input, dt, 1, spec.gravity);
    }
    out.push_back(0.5 * (Sigma + Sigma.transpose()));
  }
  return out;
}

DistributionReport distributionCompare(const DistributionSpec& spec) {
  const sim::ParticleCloud cloud = sim::sampleParticles(spec.particles);
  const std::size_t n = spec.particles.count;

  sim::CovarianceTrack eqfTrack;
  eqfTrack.times = cloud.times;
  eqfTrack.estimate = cloud.nominal;
  eqfTrack.sigma = eqfCovarianceTrack(spec.particles, cloud.nominal, spec.eqfSubsteps);

  const std::pair<ErrorCoordinates, sim::CovarianceTrack> tracks[] = {
      {ErrorCoordinates::EqF, eqfTrack},
      {ErrorCoordinates::EKF, sim::ekfPropagate(spec.particles)},
      {ErrorCoordinates::MEKF, sim::mekfPropagate(spec.particles)}};

  DistributionReport report;
  for (std::size_t k = 0; k < cloud.times.size(); ++k) {
    PositionCloud truth{"truth", cloud.times[k], {}};
    for (const auto& P : cloud.particles[k]) truth.positions.push_back(P.x());
    report.clouds.push_back(std::move(truth));
  }

  std::mt19937_64 rng(spec.particles.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  for (const auto& [c, track] : tracks) {
    for (std::size_t k = 0; k < cloud.times.size(); ++k) {
      const SE23& est = track.estimate[k];
      const MatrixXd& Sigma = track.sigma[k];
      const Eigen::Index d = Sigma.rows();

      MatrixXd E(static_cast<Eigen::Index>(n), d);
      for (std::size_t i = 0; i < n; ++i) E.row(static_cast<Eigen::Index>(i)) = coords(c, est, cloud.particles[k][i]);

      DistributionRow row;
      row.filter = c;
      row.time = cloud.times[k];
      row.covarianceError = (sampleCovariance(E) - Sigma).norm() / Sigma.norm();
      const VectorXd mean = E.colwise().mean();
      row.meanDiscrepancy = std::sqrt(mean.dot(Sigma.completeOrthogonalDecomposition().solve(mean)));
      row.skewness = mardiaSkewness(E, spec.skewnessConfidence);
      row.consistent = row.covarianceError <= spec.covarianceTolerance && row.skewness.gaussian;
      report.rows.push_back(row);

      const MatrixXd L = sim::covarianceSqrt(Sigma);
      PositionCloud implied{coordinatesName(c), cloud.times[k], {}};
      for (std::size_t i = 0; i < n; ++i) {
        VectorXd z(d);
        for (Eigen::Index j = 0; j < d; ++j) z(j) = normal(rng);
        implied.positions.push_back(coordsInverse(c, est, L * z).x());
      }
      report.clouds.push_back(std::move(implied));
    }
  }
  return report;
}

}  // namespace eqvio::analysis
