#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eqvio/eqf/pipeline.hpp"

namespace eqvio::io {

/// Malformed input, with the 1-based line number where it was found.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal text that reads back to the same double.
std::string formatDouble(double x);
/// @throws std::invalid_argument unless the whole text is a number.
double parseDouble(std::string_view text);

// Column layouts.
inline constexpr std::string_view kImuHeader = "t,wx,wy,wz,ax,ay,az";
inline constexpr std::string_view kFeatureHeader = "t,id,bx,by,bz";
inline constexpr std::string_view kTruthHeader = "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz";
inline constexpr std::string_view kEstimateHeader =
    "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,bwx,bwy,bwz,bax,bay,baz,tx,ty,tz,tqw,tqx,tqy,tqz";

/// Pose and velocity as stored on disk; the quaternion is scalar-first Hamilton.
struct NavRecord {
  double t = 0.0;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();

  lie::SE23 nav() const;
  static NavRecord fromNav(double t, const lie::SE23& X);
};

struct EstimateRecord {
  NavRecord nav;
  vislam::Vector6d bias = vislam::Vector6d::Zero();
  Eigen::Vector3d extrinsicTranslation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond extrinsicRotation = Eigen::Quaterniond::Identity();

  static EstimateRecord fromState(double t, const vislam::VisState& xi);
};

void writeImu(std::ostream& os, const std::vector<eqf::ImuSample>& imu);
/// Timestamps must be strictly increasing.
std::vector<eqf::ImuSample> readImu(std::istream& is, const std::string& source = "imu");

/// One row per bearing, frames in time order.
void writeFeatures(std::ostream& os, const std::vector<eqf::FrameSample>& frames);
/**
 * Rows sharing a timestamp form one frame; frames are returned in time order
 * whatever the row order. Ids must be non-negative integers, unique per frame.
 */
std::vector<eqf::FrameSample> readFeatures(std::istream& is, const std::string& source = "features");

void writeTruth(std::ostream& os, const std::vector<NavRecord>& truth);
std::vector<NavRecord> readTruth(std::istream& is, const std::string& source = "truth");

void writeEstimates(std::ostream& os, const std::vector<EstimateRecord>& estimates);
std::vector<EstimateRecord> readEstimates(std::istream& is, const std::string& source = "estimate");

// File helpers; the source name in errors is the path.

/// @throws std::runtime_error if the file cannot be opened.
std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& contents);

}  // namespace eqvio::io
