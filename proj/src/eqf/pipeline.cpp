#include "eqvio/eqf/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

namespace eqvio::eqf {

namespace {

using Clock = std::chrono::steady_clock;

class InputTrack {
 public:
  explicit InputTrack(const std::vector<ImuSample>& imu) : imu_(imu) {}

  ImuInput at(double t) const {
    if (imu_.empty()) return {};
    if (t <= imu_.front().t) return imu_.front().u;
    if (t >= imu_.back().t) return imu_.back().u;
    const auto it = std::upper_bound(imu_.begin(), imu_.end(), t, [](double s, const ImuSample& m) { return s < m.t; });
    const ImuSample& b = *it;
    const ImuSample& a = *(it - 1);
    const double c = (t - a.t) / (b.t - a.t);
    return {(1.0 - c) * a.u.omega + c * b.u.omega, (1.0 - c) * a.u.accel + c * b.u.accel};
  }

  /// End of the interpolation segment containing t.
  double segmentEnd(double t) const {
    const auto it = std::upper_bound(imu_.begin(), imu_.end(), t, [](double s, const ImuSample& m) { return s < m.t; });
    return it == imu_.end() ? std::numeric_limits<double>::infinity() : it->t;
  }

 private:
  const std::vector<ImuSample>& imu_;
};

}  // namespace

PipelineResult runPipeline(const VisState& prior, const std::vector<ImuSample>& imu,
                           const std::vector<FrameSample>& frames, const GainConfig& gains,
                           const PipelineOptions& options) {
  PipelineResult result;
  if (imu.empty()) return result;
  for (std::size_t k = 1; k < imu.size(); ++k) {
    if (imu[k].t - imu[k - 1].t > options.maxImuGap) {
      throw StreamGapError("IMU gap of " + std::to_string(imu[k].t - imu[k - 1].t) + " s at t = " +
                           std::to_string(imu[k - 1].t));
    }
  }

  std::vector<const FrameSample*> order;
  for (const auto& f : frames) order.push_back(&f);
  std::stable_sort(order.begin(), order.end(), [](const FrameSample* a, const FrameSample* b) { return a->t < b->t; });

  const InputTrack track(imu);
  FilterState fs = initialize(prior, gains, imu.front().t);
  Clock::duration sinceFrame{};

  auto propagateTo = [&](double t) {
    const auto start = Clock::now();
    while (fs.time < t) {
      const double end = std::min(t, track.segmentEnd(fs.time));
      fs = propagate(fs, track.at(fs.time), track.at(end), end - fs.time, gains);
      fs.time = end;
    }
    sinceFrame += Clock::now() - start;
  };

  std::size_t next = 0;
  auto processFramesUpTo = [&](double t) {
    for (; next < order.size() && order[next]->t <= t; ++next) {
      propagateTo(order[next]->t);
      const auto start = Clock::now();
      FrameReport report;
      fs = processFrame(fs, order[next]->bearings, gains, &report);
      sinceFrame += Clock::now() - start;
      result.frames.push_back(std::move(report));
      result.frameMillis.push_back(std::chrono::duration<double, std::milli>(sinceFrame).count());
      sinceFrame = {};
    }
  };

  for (const auto& m : imu) {
    processFramesUpTo(m.t);
    propagateTo(m.t);
    result.estimates.push_back({m.t, stateEstimate(fs)});
  }
  processFramesUpTo(std::numeric_limits<double>::infinity());
  return result;
}

}  // namespace eqvio::eqf
