#include "eqvio/analysis/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace eqvio::analysis {

using Eigen::Vector3d;

std::vector<Vector3d> NavTrajectory::positions() const {
  std::vector<Vector3d> p;
  p.reserve(nav.size());
  for (const auto& X : nav) p.push_back(X.x());
  return p;
}

AlignmentResult alignSEe3(const std::vector<Vector3d>& estimate, const std::vector<Vector3d>& truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("trajectory lengths differ");
  const std::size_t n = estimate.size();
  if (n < 2) throw std::invalid_argument("alignment needs at least 2 samples");

  Vector3d mp = Vector3d::Zero();
  Vector3d mq = Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mp += estimate[i];
    mq += truth[i];
  }
  mp /= static_cast<double>(n);
  mq /= static_cast<double>(n);

  double c = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3d a = estimate[i] - mp;
    const Vector3d b = truth[i] - mq;
    c += a.x() * b.x() + a.y() * b.y();
    s += a.x() * b.y() - a.y() * b.x();
  }
  const double theta = (c == 0.0 && s == 0.0) ? 0.0 : std::atan2(s, c);

  AlignmentResult out;
  out.S = lie::SEe3(theta, mq - lie::rotZ(theta) * mp);
  double sum = 0.0;
  out.errors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = (out.S * estimate[i] - truth[i]).norm();
    out.errors.push_back(e);
    sum += e * e;
  }
  out.rmse = std::sqrt(sum / static_cast<double>(n));
  return out;
}

DriftSeries driftMetrics(const NavTrajectory& estimate, const NavTrajectory& truth) {
  if (estimate.size() != truth.size() || estimate.nav.size() != truth.nav.size() ||
      estimate.t.size() != estimate.nav.size()) {
    throw std::invalid_argument("trajectory lengths differ");
  }
  DriftSeries d;
  d.t = estimate.t;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const auto& Rh = estimate.nav[i].R().matrix();
    const auto& R = truth.nav[i].R().matrix();
    d.velocityError.push_back((Rh.transpose() * estimate.nav[i].v() - R.transpose() * truth.nav[i].v()).norm());
    const Vector3d gh = Rh.row(2).transpose();
    const Vector3d g = R.row(2).transpose();
    d.gravityError.push_back(std::atan2(gh.cross(g).norm(), gh.dot(g)));
  }
  return d;
}

std::size_t tailStart(std::size_t n, double tailFraction) {
  const double f = std::clamp(tailFraction, 0.0, 1.0);
  return n - static_cast<std::size_t>(std::floor(f * static_cast<double>(n)));
}

DriftSummary summarizeDrift(const DriftSeries& d, double tailFraction) {
  DriftSummary s;
  for (std::size_t i = tailStart(d.t.size(), tailFraction); i < d.t.size(); ++i) {
    s.tailVelocity = std::max(s.tailVelocity, d.velocityError[i]);
    s.tailGravity = std::max(s.tailGravity, d.gravityError[i]);
  }
  return s;
}

TrendResult trendTest(const std::vector<double>& t, const std::vector<double>& values, int blocks,
                      double confidence) {
  if (t.size() != values.size()) throw std::invalid_argument("series lengths differ");
  if (blocks < 3 || values.size() < static_cast<std::size_t>(blocks)) {
    throw std::invalid_argument("not enough samples for the trend test");
  }
  const std::size_t n = values.size();
  Eigen::VectorXd bt(blocks), bv(blocks);
  for (int b = 0; b < blocks; ++b) {
    const std::size_t lo = n * b / blocks;
    const std::size_t hi = n * (b + 1) / blocks;
    double st = 0.0;
    double sv = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      st += t[i];
      sv += values[i];
    }
    bt(b) = st / static_cast<double>(hi - lo);
    bv(b) = sv / static_cast<double>(hi - lo);
  }
  const double mt = bt.mean();
  const double mv = bv.mean();
  const double sxx = (bt.array() - mt).square().sum();
  TrendResult r;
  r.slope = ((bt.array() - mt) * (bv.array() - mv)).sum() / sxx;
  const Eigen::ArrayXd resid = (bv.array() - mv) - r.slope * (bt.array() - mt);
  const double dof = blocks - 2;
  r.standardError = std::sqrt(resid.square().sum() / dof / sxx);
  r.tStatistic = r.standardError > 0.0 ? r.slope / r.standardError
                                       : (r.slope > 0.0 ? INFINITY : (r.slope < 0.0 ? -INFINITY : 0.0));
  r.critical = boost::math::quantile(boost::math::students_t(dof), confidence);
  r.growing = r.tStatistic > r.critical;
  return r;
}

}  // namespace eqvio::analysis
