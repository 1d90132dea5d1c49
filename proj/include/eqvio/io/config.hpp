#pragma once

#include <Eigen/Geometry>
#include <stdexcept>
#include <string>

#include "eqvio/analysis/distribution.hpp"
#include "eqvio/analysis/linerr.hpp"
#include "eqvio/eqf/filter.hpp"
#include "eqvio/eqf/pipeline.hpp"
#include "eqvio/sim/world.hpp"

namespace eqvio::io {

/// Invalid configuration content: unknown or repeated keys, or values
/// outside their valid range. line() is 0 when no single line is at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Rigid transform as written in a config file.
struct PoseConfig {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  lie::SE3 toSE3() const;
  static PoseConfig fromSE3(const lie::SE3& P);
};

struct RunConfig {
  RunConfig();

  // Simulation.
  sim::WorldSpec world;
  PoseConfig simExtrinsics;
  /// Drop the white noise of IMU and bearings; biases stay.
  bool noiseFree = false;

  // Filter.
  eqf::GainConfig gains;
  eqf::PipelineOptions pipeline;
  PoseConfig extrinsicsPrior;
  /// Start from the first row of truth.csv when the dataset has one.
  bool priorFromTruth = true;
  PoseConfig priorPose;
  Eigen::Vector3d priorVelocity = Eigen::Vector3d::Zero();

  // Evaluation.
  double tailFraction = 0.5;
  int trendBlocks = 10;

  // Analysis experiments.
  analysis::LinErrSetup linerr;
  analysis::LinErrGridSpec linerrGrid;
  analysis::DistributionSpec dist;

  /// Directory holding imu.csv, features.csv and truth.csv.
  std::string dataset;
};

/**
 * @brief Parses flat "key = value" text. '#' starts a comment; vectors are
 * whitespace-separated numbers, quaternions are "w x y z".
 * @throws ParseError on malformed lines or values, ConfigError on unknown
 * or repeated keys and on failed validation.
 */
RunConfig parseConfig(const std::string& text, const std::string& source = "config");

/// Every key with its current value; parseConfig reads it back unchanged.
std::string writeConfig(const RunConfig& config);

/// @throws ConfigError describing the first invalid setting.
void validate(const RunConfig& config);

/// World specification with the configured extrinsics and noise switch applied.
sim::WorldSpec worldSpec(const RunConfig& config);

}  // namespace eqvio::io
