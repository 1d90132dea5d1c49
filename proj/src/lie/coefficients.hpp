#pragma once

#include <cmath>

// Series coefficients of the SO(3) exponential and its Jacobians, with
// expansions below a threshold where the closed forms lose precision.
namespace eqvio::lie::detail {

inline constexpr double kSeriesThreshold = 1e-4;

// sin(t)/t
inline double coeffA(double t) {
  if (t < kSeriesThreshold) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

// (1 - cos t)/t^2
inline double coeffB(double t) {
  if (t < kSeriesThreshold) return 0.5 - t * t / 24.0;
  const double h = std::sin(0.5 * t) / t;
  return 2.0 * h * h;
}

// (t - sin t)/t^3
inline double coeffC(double t) {
  if (t < 1e-2) {
    const double t2 = t * t;
    return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  }
  return (t - std::sin(t)) / (t * t * t);
}

// 1/t^2 - (1 + cos t)/(2 t sin t)
inline double coeffJinv(double t) {
  if (t < 1e-2) {
    const double t2 = t * t;
    return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  }
  return 1.0 / (t * t) - (1.0 + std::cos(t)) / (2.0 * t * std::sin(t));
}

}  // namespace eqvio::lie::detail
