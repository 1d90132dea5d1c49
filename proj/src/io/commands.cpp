#include "eqvio/io/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "eqvio/sim/world.hpp"

namespace eqvio::io {

namespace fs = std::filesystem;

LogLevel logLevel() {
  const char* env = std::getenv("EQVIO_LOG");
  if (!env) return LogLevel::Info;
  const std::string v(env);
  if (v == "quiet" || v == "0") return LogLevel::Quiet;
  if (v == "debug" || v == "2") return LogLevel::Debug;
  return LogLevel::Info;
}

void logMessage(LogLevel level, const std::string& message) {
  if (level != LogLevel::Quiet && static_cast<int>(level) <= static_cast<int>(logLevel())) {
    std::cerr << message << '\n';
  }
}

Dataset simulateDataset(const RunConfig& config) {
  Dataset data;
  for (const auto& s : sim::generateWorld(worldSpec(config))) {
    data.imu.push_back({s.t, s.imu});
    if (s.bearings) data.frames.push_back({s.t, *s.bearings});
    data.truth.push_back(NavRecord::fromNav(s.t, s.truth.nav()));
  }
  return data;
}

void writeDataset(const Dataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream imu, features, truth;
  writeImu(imu, data.imu);
  writeFeatures(features, data.frames);
  writeTruth(truth, data.truth);
  writeFile(dir / kImuFile, imu.str());
  writeFile(dir / kFeatureFile, features.str());
  writeFile(dir / kTruthFile, truth.str());
}

Dataset readDataset(const fs::path& dir) {
  Dataset data;
  {
    std::istringstream in(readFile(dir / kImuFile));
    data.imu = readImu(in, (dir / kImuFile).string());
  }
  {
    std::istringstream in(readFile(dir / kFeatureFile));
    data.frames = readFeatures(in, (dir / kFeatureFile).string());
  }
  if (fs::exists(dir / kTruthFile)) {
    std::istringstream in(readFile(dir / kTruthFile));
    data.truth = readTruth(in, (dir / kTruthFile).string());
  }
  return data;
}

vislam::VisState filterPrior(const RunConfig& config, const Dataset& data) {
  vislam::VisState prior;
  if (config.priorFromTruth && !data.truth.empty()) {
    prior.setNav(data.truth.front().nav());
  } else {
    prior.pose = config.priorPose.toSE3();
    prior.velocity = config.priorVelocity;
  }
  prior.extrinsics = config.extrinsicsPrior.toSE3();
  return prior;
}

FilterRun runFilter(const RunConfig& config, const Dataset& data) {
  const eqf::PipelineResult result =
      eqf::runPipeline(filterPrior(config, data), data.imu, data.frames, config.gains, config.pipeline);
  FilterRun run;
  for (const auto& e : result.estimates) run.estimates.push_back(EstimateRecord::fromState(e.t, e.state));
  run.frames = result.frames;
  run.frameMillis = result.frameMillis;
  for (double ms : run.frameMillis) {
    run.meanMillis += ms;
    run.maxMillis = std::max(run.maxMillis, ms);
  }
  if (!run.frameMillis.empty()) run.meanMillis /= static_cast<double>(run.frameMillis.size());
  return run;
}

std::string timingReport(const FilterRun& run) {
  std::ostringstream os;
  os << "frames = " << run.frameMillis.size() << '\n'
     << "mean_ms = " << formatDouble(run.meanMillis) << '\n'
     << "max_ms = " << formatDouble(run.maxMillis) << '\n';
  return os.str();
}

Evaluation evaluate(const std::vector<EstimateRecord>& estimates, const std::vector<NavRecord>& truth,
                    const RunConfig& config) {
  analysis::NavTrajectory est, tru;
  std::size_t j = 0;
  for (const auto& e : estimates) {
    while (j < truth.size() && truth[j].t < e.nav.t - 1e-9) ++j;
    if (j == truth.size()) break;
    if (std::abs(truth[j].t - e.nav.t) <= 1e-9) {
      est.t.push_back(e.nav.t);
      est.nav.push_back(e.nav.nav());
      tru.t.push_back(truth[j].t);
      tru.nav.push_back(truth[j].nav());
    }
  }
  if (est.size() < 2) throw std::invalid_argument("fewer than 2 matching timestamps");

  Evaluation out;
  out.samples = est.size();
  out.alignment = analysis::alignSEe3(est.positions(), tru.positions());
  out.drift = analysis::driftMetrics(est, tru);
  out.tail = analysis::summarizeDrift(out.drift, config.tailFraction);
  const std::size_t start = analysis::tailStart(out.samples, config.tailFraction);
  const std::vector<double> t(out.drift.t.begin() + start, out.drift.t.end());
  const std::vector<double> v(out.drift.velocityError.begin() + start, out.drift.velocityError.end());
  const std::vector<double> g(out.drift.gravityError.begin() + start, out.drift.gravityError.end());
  if (t.size() >= static_cast<std::size_t>(config.trendBlocks)) {
    out.velocityTrend = analysis::trendTest(t, v, config.trendBlocks);
    out.gravityTrend = analysis::trendTest(t, g, config.trendBlocks);
  }
  return out;
}

std::string evaluationReport(const Evaluation& e) {
  std::ostringstream os;
  auto kv = [&os](const std::string& k, double v) { os << k << " = " << formatDouble(v) << '\n'; };
  os << "samples = " << e.samples << '\n';
  kv("rmse", e.alignment.rmse);
  kv("align_yaw", e.alignment.S.theta());
  kv("align_x", e.alignment.S.x().x());
  kv("align_y", e.alignment.S.x().y());
  kv("align_z", e.alignment.S.x().z());
  kv("tail_velocity", e.tail.tailVelocity);
  kv("tail_gravity_deg", e.tail.tailGravity * 180.0 / M_PI);
  kv("velocity_trend_slope", e.velocityTrend.slope);
  kv("velocity_trend_t", e.velocityTrend.tStatistic);
  os << "velocity_trend_growing = " << (e.velocityTrend.growing ? 1 : 0) << '\n';
  kv("gravity_trend_slope", e.gravityTrend.slope);
  kv("gravity_trend_t", e.gravityTrend.tStatistic);
  os << "gravity_trend_growing = " << (e.gravityTrend.growing ? 1 : 0) << '\n';
  return os.str();
}

std::string cmdSimulate(const RunConfig& config, const fs::path& outDir) {
  const Dataset data = simulateDataset(config);
  writeDataset(data, outDir);
  std::ostringstream os;
  os << "imu_rows = " << data.imu.size() << '\n' << "frames = " << data.frames.size() << '\n';
  return os.str();
}

std::string cmdFilter(const RunConfig& config, const fs::path& datasetDir, const fs::path& outDir) {
  const Dataset data = readDataset(datasetDir);
  logMessage(LogLevel::Debug, "read " + std::to_string(data.imu.size()) + " imu samples and " +
                                  std::to_string(data.frames.size()) + " frames");
  const FilterRun run = runFilter(config, data);
  fs::create_directories(outDir);
  std::ostringstream est;
  writeEstimates(est, run.estimates);
  writeFile(outDir / kEstimateFile, est.str());
  const std::string timing = timingReport(run);
  writeFile(outDir / kTimingFile, timing);
  return timing;
}

std::string cmdEvaluate(const RunConfig& config, const fs::path& estimatePath, const fs::path& truthPath) {
  std::istringstream e(readFile(estimatePath));
  std::istringstream t(readFile(truthPath));
  return evaluationReport(evaluate(readEstimates(e, estimatePath.string()), readTruth(t, truthPath.string()), config));
}

std::string cmdLinerr(const RunConfig& config, const fs::path& outDir) {
  fs::create_directories(outDir);
  const analysis::LinErrGrid grid = analysis::linearisationGrid(config.linerr, config.linerrGrid);
  std::ostringstream report;
  for (const auto& f : grid.fields) {
    std::ostringstream os;
    os << "z,theta,value\n";
    for (std::size_t i = 0; i < grid.z.size(); ++i) {
      for (std::size_t j = 0; j < grid.theta.size(); ++j) {
        os << formatDouble(grid.z[i]) << ',' << formatDouble(grid.theta[j]) << ','
           << formatDouble(f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
      }
    }
    writeFile(outDir / ("linerr_" + f.name + ".csv"), os.str());
    report << f.name << ".max = " << formatDouble(f.max()) << '\n';
  }
  return report.str();
}

std::string cmdDistcompare(const RunConfig& config, const fs::path& outDir) {
  fs::create_directories(outDir);
  const analysis::DistributionReport r = analysis::distributionCompare(config.dist);
  std::ostringstream csv, report;
  csv << "filter,t,covariance_error,mean_discrepancy,skewness,skewness_bound,gaussian,consistent\n";
  for (const auto& row : r.rows) {
    const std::string name = analysis::coordinatesName(row.filter);
    csv << name << ',' << formatDouble(row.time) << ',' << formatDouble(row.covarianceError) << ','
        << formatDouble(row.meanDiscrepancy) << ',' << formatDouble(row.skewness.statistic) << ','
        << formatDouble(row.skewness.bound) << ',' << (row.skewness.gaussian ? 1 : 0) << ','
        << (row.consistent ? 1 : 0) << '\n';
    const std::string prefix = name + ".t" + formatDouble(row.time) + ".";
    report << prefix << "covariance_error = " << formatDouble(row.covarianceError) << '\n'
           << prefix << "mean_discrepancy = " << formatDouble(row.meanDiscrepancy) << '\n'
           << prefix << "skewness = " << formatDouble(row.skewness.statistic) << '\n'
           << prefix << "skewness_bound = " << formatDouble(row.skewness.bound) << '\n'
           << prefix << "consistent = " << (row.consistent ? 1 : 0) << '\n';
  }
  writeFile(outDir / "distcompare.csv", csv.str());

  std::ostringstream clouds;
  clouds << "source,t,px,py,pz\n";
  for (const auto& c : r.clouds) {
    for (const auto& p : c.positions) {
      clouds << c.source << ',' << formatDouble(c.time) << ',' << formatDouble(p.x()) << ','
             << formatDouble(p.y()) << ',' << formatDouble(p.z()) << '\n';
    }
  }
  writeFile(outDir / "clouds.csv", clouds.str());
  return report.str();
}

}  // namespace eqvio::io
