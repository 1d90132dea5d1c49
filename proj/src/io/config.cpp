#include "eqvio/io/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "eqvio/io/formats.hpp"

namespace eqvio::io {

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "config:" + std::to_string(line) + ": " + message : "config: " + message),
      line_(line) {}

lie::SE3 PoseConfig::toSE3() const { return lie::SE3(lie::SO3::fromQuaternion(rotation), translation); }

PoseConfig PoseConfig::fromSE3(const lie::SE3& P) { return PoseConfig{P.x(), P.R().quaternion()}; }

RunConfig::RunConfig() {
  world.noise.gyroDensity = 1e-3;
  world.noise.accelDensity = 1e-2;
  world.noise.gyroBias = Eigen::Vector3d::Constant(0.01);
  world.noise.accelBias = Eigen::Vector3d::Constant(0.05);
  world.noise.bearingSigma = 0.002;
  simExtrinsics = PoseConfig::fromSE3(sim::defaultExtrinsics());
  extrinsicsPrior = simExtrinsics;
  gains.defaultDepth = 3.0;
}

namespace {

std::vector<double> numbers(std::string_view text) {
  std::vector<double> out;
  std::istringstream ss{std::string(text)};
  std::string tok;
  while (ss >> tok) out.push_back(parseDouble(tok));
  return out;
}

// Value conversions; each parse throws std::invalid_argument on bad text.

void parseValue(std::string_view s, double& x) {
  const auto v = numbers(s);
  if (v.size() != 1) throw std::invalid_argument("expected one number");
  x = v[0];
}

void parseValue(std::string_view s, bool& b) {
  if (s == "true" || s == "1") {
    b = true;
  } else if (s == "false" || s == "0") {
    b = false;
  } else {
    throw std::invalid_argument("expected true or false");
  }
}

template <typename Int>
void parseInteger(std::string_view s, Int& n) {
  double x = 0.0;
  parseValue(s, x);
  if (x != std::floor(x) || x < 0.0 || x > 9.007199254740992e15) {
    throw std::invalid_argument("expected a non-negative integer");
  }
  n = static_cast<Int>(x);
}

void parseValue(std::string_view s, int& n) { parseInteger(s, n); }
void parseValue(std::string_view s, std::size_t& n) { parseInteger(s, n); }

void parseValue(std::string_view s, std::string& out) { out = std::string(s); }

template <int N>
void parseValue(std::string_view s, Eigen::Matrix<double, N, 1>& v) {
  const auto x = numbers(s);
  if (x.size() != static_cast<std::size_t>(N)) {
    throw std::invalid_argument("expected " + std::to_string(N) + " numbers");
  }
  for (int i = 0; i < N; ++i) v(i) = x[i];
}

void parseValue(std::string_view s, Eigen::Quaterniond& q) {
  Eigen::Vector4d v;
  parseValue(s, v);
  if (v.norm() < 1e-9) throw std::invalid_argument("zero quaternion");
  q = Eigen::Quaterniond(v(0), v(1), v(2), v(3));
}

void parseValue(std::string_view s, sim::TrajectoryKind& k) { k = sim::trajectoryFromName(std::string(s)); }

std::string formatValue(double x) { return formatDouble(x); }
std::string formatValue(bool b) { return b ? "true" : "false"; }
std::string formatValue(int n) { return std::to_string(n); }
std::string formatValue(std::size_t n) { return std::to_string(n); }
std::string formatValue(const std::string& s) { return s; }
std::string formatValue(sim::TrajectoryKind k) { return sim::trajectoryName(k); }

template <int N>
std::string formatValue(const Eigen::Matrix<double, N, 1>& v) {
  std::string out;
  for (int i = 0; i < N; ++i) out += (i ? " " : "") + formatDouble(v(i));
  return out;
}

std::string formatValue(const Eigen::Quaterniond& q) {
  return formatValue(Eigen::Vector4d(q.w(), q.x(), q.y(), q.z()));
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

/// Field bound to the member returned by access(config).
template <typename Access>
Field field(std::string key, Access access) {
  return Field{std::move(key), [access](RunConfig& c, std::string_view v) { parseValue(v, access(c)); },
               [access](const RunConfig& c) { return formatValue(access(c)); }};
}

#define EQVIO_FIELD(key, member) field(key, [](auto& c) -> auto& { return c.member; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      EQVIO_FIELD("seed", world.noise.seed),
      Field{"gravity",
            [](RunConfig& c, std::string_view v) {
              parseValue(v, c.gains.gravity);
              c.world.gravity = c.gains.gravity;
              c.dist.particles.gravity = c.gains.gravity;
            },
            [](const RunConfig& c) { return formatValue(c.gains.gravity); }},
      EQVIO_FIELD("dataset", dataset),

      EQVIO_FIELD("sim.trajectory", world.trajectory.kind),
      EQVIO_FIELD("sim.radius", world.trajectory.radius),
      EQVIO_FIELD("sim.period", world.trajectory.period),
      EQVIO_FIELD("sim.altitude", world.trajectory.altitude),
      EQVIO_FIELD("sim.excitation", world.trajectory.excitation),
      EQVIO_FIELD("sim.heave", world.trajectory.heave),
      EQVIO_FIELD("sim.duration", world.trajectory.duration),
      EQVIO_FIELD("sim.imu_rate", world.trajectory.imuRate),
      EQVIO_FIELD("sim.frame_rate", world.trajectory.frameRate),
      EQVIO_FIELD("sim.landmarks", world.numLandmarks),
      EQVIO_FIELD("sim.box_min", world.boxMin),
      EQVIO_FIELD("sim.box_max", world.boxMax),
      EQVIO_FIELD("sim.fov_half_angle", world.fovHalfAngle),
      EQVIO_FIELD("sim.extrinsics_translation", simExtrinsics.translation),
      EQVIO_FIELD("sim.extrinsics_rotation", simExtrinsics.rotation),

      EQVIO_FIELD("noise.free", noiseFree),
      EQVIO_FIELD("noise.gyro_density", world.noise.gyroDensity),
      EQVIO_FIELD("noise.accel_density", world.noise.accelDensity),
      EQVIO_FIELD("noise.gyro_bias", world.noise.gyroBias),
      EQVIO_FIELD("noise.accel_bias", world.noise.accelBias),
      EQVIO_FIELD("noise.bearing_sigma", world.noise.bearingSigma),

      EQVIO_FIELD("filter.sigma0_nav", gains.sigma0Nav),
      EQVIO_FIELD("filter.sigma0_bias", gains.sigma0Bias),
      EQVIO_FIELD("filter.sigma0_extrinsics", gains.sigma0Ext),
      EQVIO_FIELD("filter.sigma0_landmark", gains.sigma0Landmark),
      EQVIO_FIELD("filter.process_nav", gains.processNav),
      EQVIO_FIELD("filter.process_bias", gains.processBias),
      EQVIO_FIELD("filter.process_extrinsics", gains.processExt),
      EQVIO_FIELD("filter.process_landmark", gains.processLandmark),
      EQVIO_FIELD("filter.input_noise", gains.inputNoise),
      EQVIO_FIELD("filter.bearing_noise", gains.bearingNoise),
      EQVIO_FIELD("filter.outlier_gate", gains.outlierGate),
      EQVIO_FIELD("filter.max_landmarks", gains.maxLandmarks),
      EQVIO_FIELD("filter.initial_depth", gains.defaultDepth),
      EQVIO_FIELD("filter.max_imu_gap", pipeline.maxImuGap),
      EQVIO_FIELD("filter.extrinsics_translation", extrinsicsPrior.translation),
      EQVIO_FIELD("filter.extrinsics_rotation", extrinsicsPrior.rotation),
      EQVIO_FIELD("filter.prior_from_truth", priorFromTruth),
      EQVIO_FIELD("filter.prior_position", priorPose.translation),
      EQVIO_FIELD("filter.prior_attitude", priorPose.rotation),
      EQVIO_FIELD("filter.prior_velocity", priorVelocity),

      EQVIO_FIELD("eval.tail_fraction", tailFraction),
      EQVIO_FIELD("eval.trend_blocks", trendBlocks),

      EQVIO_FIELD("linerr.q_hat", linerr.qHat),
      EQVIO_FIELD("linerr.omega", linerr.omega),
      EQVIO_FIELD("linerr.velocity", linerr.v),
      EQVIO_FIELD("linerr.z_cells", linerrGrid.zCells),
      EQVIO_FIELD("linerr.theta_cells", linerrGrid.thetaCells),

      EQVIO_FIELD("dist.seed", dist.particles.seed),
      EQVIO_FIELD("dist.particles", dist.particles.count),
      EQVIO_FIELD("dist.horizon", dist.particles.horizon),
      EQVIO_FIELD("dist.step", dist.particles.step),
      EQVIO_FIELD("dist.substeps", dist.particles.substeps),
      EQVIO_FIELD("dist.omega", dist.particles.input.omega),
      EQVIO_FIELD("dist.accel", dist.particles.input.accel),
      EQVIO_FIELD("dist.covariance_tolerance", dist.covarianceTolerance),
      EQVIO_FIELD("dist.skewness_confidence", dist.skewnessConfidence),
      Field{"dist.sigma0",
            [](RunConfig& c, std::string_view v) {
              lie::Vector9d d;
              parseValue(v, d);
              c.dist.particles.sigma0 = d.asDiagonal();
            },
            [](const RunConfig& c) { return formatValue(lie::Vector9d(c.dist.particles.sigma0.diagonal())); }},
  };
  return table;
}

#undef EQVIO_FIELD

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

RunConfig parseConfig(const std::string& text, const std::string& source) {
  std::map<std::string_view, const Field*> byKey;
  for (const auto& f : fields()) byKey.emplace(f.key, &f);

  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s(raw);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line, "expected 'key = value'");
    const std::string key(trim(s.substr(0, eq)));
    const std::string_view value = trim(s.substr(eq + 1));
    const auto it = byKey.find(key);
    if (it == byKey.end()) throw ConfigError(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(line, "repeated key '" + key + "'");
    try {
      it->second->set(config, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line, key + ": " + e.what());
    }
  }
  validate(config);
  return config;
}

std::string writeConfig(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

void validate(const RunConfig& c) {
  try {
    sim::validate(worldSpec(c));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  const auto& g = c.gains;
  auto positive = [](const auto& v) { return (v.array() > 0.0).all(); };
  auto nonNegative = [](const auto& v) { return (v.array() >= 0.0).all(); };
  if (!positive(g.sigma0Nav) || !positive(g.sigma0Bias) || !positive(g.sigma0Ext) || !positive(g.sigma0Landmark)) {
    throw ConfigError(0, "initial variances must be positive");
  }
  if (!nonNegative(g.processNav) || !nonNegative(g.processBias) || !nonNegative(g.processExt) ||
      !nonNegative(g.processLandmark) || !nonNegative(g.inputNoise)) {
    throw ConfigError(0, "process and input noise must be non-negative");
  }
  if (!(g.bearingNoise > 0.0)) throw ConfigError(0, "filter.bearing_noise must be positive");
  if (!(g.outlierGate > 0.0)) throw ConfigError(0, "filter.outlier_gate must be positive");
  if (!(g.defaultDepth > 0.0)) throw ConfigError(0, "filter.initial_depth must be positive");
  if (!(g.gravity > 0.0)) throw ConfigError(0, "gravity must be positive");
  if (!(c.pipeline.maxImuGap > 0.0)) throw ConfigError(0, "filter.max_imu_gap must be positive");
  if (!(c.tailFraction > 0.0 && c.tailFraction <= 1.0)) throw ConfigError(0, "eval.tail_fraction must be in (0, 1]");
  if (c.trendBlocks < 3) throw ConfigError(0, "eval.trend_blocks must be at least 3");
  if (c.linerrGrid.zCells < 1 || c.linerrGrid.thetaCells < 1) throw ConfigError(0, "linerr grid must be non-empty");
  if (c.linerr.qHat.norm() == 0.0) throw ConfigError(0, "linerr.q_hat must be non-zero");
  const auto& p = c.dist.particles;
  if (p.count < 2 || !(p.horizon > 0.0) || !(p.step > 0.0) || p.substeps < 1) {
    throw ConfigError(0, "invalid distribution experiment settings");
  }
  if (!(c.dist.covarianceTolerance > 0.0) || !(c.dist.skewnessConfidence > 0.0 && c.dist.skewnessConfidence < 1.0)) {
    throw ConfigError(0, "invalid distribution test thresholds");
  }
}

sim::WorldSpec worldSpec(const RunConfig& config) {
  sim::WorldSpec w = config.world;
  w.extrinsics = config.simExtrinsics.toSE3();
  if (config.noiseFree) {
    w.noise.gyroDensity = 0.0;
    w.noise.accelDensity = 0.0;
    w.noise.bearingSigma = 0.0;
  }
  return w;
}

}  // namespace eqvio::io
