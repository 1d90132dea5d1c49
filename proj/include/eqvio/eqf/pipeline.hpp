#pragma once

#include <vector>

#include "eqvio/eqf/filter.hpp"

namespace eqvio::eqf {

struct ImuSample {
  double t = 0.0;
  ImuInput u;
};

struct FrameSample {
  double t = 0.0;
  BearingSet bearings;
};

struct EstimateSample {
  double t = 0.0;
  VisState state;
};

/// IMU gap larger than the configured threshold.
class StreamGapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineOptions {
  /// Largest allowed spacing between consecutive IMU samples (s).
  double maxImuGap = 0.1;
};

struct PipelineResult {
  /// Estimate after every IMU sample, frames at the same stamp already applied.
  std::vector<EstimateSample> estimates;
  /// One report per processed frame.
  std::vector<FrameReport> frames;
  /// Wall time per frame spent in propagation since the previous frame, preprocessing and update.
  std::vector<double> frameMillis;
};

/**
 * @brief Runs the filter over merged IMU and frame streams.
 *
 * The input is linearly interpolated between IMU samples and held after the
 * last one. Frames are processed in timestamp order.
 * @throws StreamGapError, FilterDivergence.
 */
PipelineResult runPipeline(const VisState& prior, const std::vector<ImuSample>& imu,
                           const std::vector<FrameSample>& frames, const GainConfig& gains,
                           const PipelineOptions& options = {});

}  // namespace eqvio::eqf
