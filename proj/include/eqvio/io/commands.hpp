#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eqvio/analysis/metrics.hpp"
#include "eqvio/io/config.hpp"
#include "eqvio/io/formats.hpp"

namespace eqvio::io {

/// Verbosity from the EQVIO_LOG environment variable.
enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

/// "quiet", "info", "debug" or 0..2; Info when unset or unrecognised.
LogLevel logLevel();
/// Writes to stderr when level is enabled.
void logMessage(LogLevel level, const std::string& message);

/// Output file names inside a dataset or output directory.
inline constexpr const char* kImuFile = "imu.csv";
inline constexpr const char* kFeatureFile = "features.csv";
inline constexpr const char* kTruthFile = "truth.csv";
inline constexpr const char* kEstimateFile = "estimate.csv";
inline constexpr const char* kTimingFile = "timing.txt";

struct Dataset {
  std::vector<eqf::ImuSample> imu;
  std::vector<eqf::FrameSample> frames;
  std::vector<NavRecord> truth;
};

/// Synthetic dataset for the configured world.
Dataset simulateDataset(const RunConfig& config);
/// Writes imu.csv, features.csv and truth.csv.
void writeDataset(const Dataset& data, const std::filesystem::path& dir);
/// truth.csv is optional; the other two files are required.
Dataset readDataset(const std::filesystem::path& dir);

struct FilterRun {
  std::vector<EstimateRecord> estimates;
  std::vector<eqf::FrameReport> frames;
  std::vector<double> frameMillis;
  double meanMillis = 0.0;
  double maxMillis = 0.0;
};

/// Filter prior: the first truth row when allowed and present, else the configured prior.
vislam::VisState filterPrior(const RunConfig& config, const Dataset& data);

/// @throws eqf::FilterDivergence, eqf::StreamGapError.
FilterRun runFilter(const RunConfig& config, const Dataset& data);

/// "frames = .. / mean_ms = .. / max_ms = .." lines.
std::string timingReport(const FilterRun& run);

struct Evaluation {
  std::size_t samples = 0;
  analysis::AlignmentResult alignment;
  analysis::DriftSeries drift;
  analysis::DriftSummary tail;
  analysis::TrendResult velocityTrend;
  analysis::TrendResult gravityTrend;
};

/**
 * @brief Aligned position error, drift metrics and trend tests over the
 * samples whose timestamps agree within 1e-9 s.
 * @throws std::invalid_argument if fewer than 2 samples match.
 */
Evaluation evaluate(const std::vector<EstimateRecord>& estimates, const std::vector<NavRecord>& truth,
                    const RunConfig& config);

/// key = value lines.
std::string evaluationReport(const Evaluation& e);

// Subcommands; each returns the text printed on stdout.

std::string cmdSimulate(const RunConfig& config, const std::filesystem::path& outDir);
std::string cmdFilter(const RunConfig& config, const std::filesystem::path& datasetDir,
                      const std::filesystem::path& outDir);
std::string cmdEvaluate(const RunConfig& config, const std::filesystem::path& estimatePath,
                        const std::filesystem::path& truthPath);
/// One z,theta,value CSV per linearisation field.
std::string cmdLinerr(const RunConfig& config, const std::filesystem::path& outDir);
/// distcompare.csv with one row per filter and time, clouds.csv with the sampled positions.
std::string cmdDistcompare(const RunConfig& config, const std::filesystem::path& outDir);

}  // namespace eqvio::io
