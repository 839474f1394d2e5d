#ifndef GESTUREHMM_SMOOTHING_HPP
#define GESTUREHMM_SMOOTHING_HPP

#include <cmath>
#include <vector>

#include "gesturehmm/core.hpp"

namespace gesturehmm {

// Causal lag-Gaussian kernel: weight of the sample at lag i (i = 0 most
// recent) is proportional to exp(-i^2 / (2 sigma^2)) with sigma =
// (2/3 s) * sample_rate and window W = round(1 s * sample_rate).
inline std::vector<double> smoothing_weights(double sample_rate_hz) {
  const int w = static_cast<int>(std::lround(sample_rate_hz));
  const int window = w < 1 ? 1 : w;
  const double sigma = (2.0 / 3.0) * sample_rate_hz;
  std::vector<double> weights(static_cast<std::size_t>(window));
  double sum = 0.0;
  for (int i = 0; i < window; ++i) {
    double wi = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    weights[static_cast<std::size_t>(i)] = wi;
    sum += wi;
  }
  for (double& wi : weights) wi /= sum;
  return weights;
}

// Smooths each axis independently with the causal kernel. Near the session
// start the window is truncated to available samples and renormalized.
inline SensorSeries gaussian_smooth(const SensorSeries& series) {
  series.validate();
  const auto weights = smoothing_weights(series.sample_rate_hz);
  const std::size_t window = weights.size();

  SensorSeries out;
  out.session_id = series.session_id;
  out.sample_rate_hz = series.sample_rate_hz;
  out.samples.resize(series.size());

  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t avail = std::min(window, t + 1);
    double wsum = 0.0;
    for (std::size_t i = 0; i < avail; ++i) wsum += weights[i];
    for (int a = 0; a < kNumAxes; ++a) {
      double acc = 0.0;
      for (std::size_t i = 0; i < avail; ++i) acc += weights[i] * series.samples[t - i][a];
      out.samples[t][a] = acc / wsum;
    }
  }
  return out;
}

}  // namespace gesturehmm

#endif
