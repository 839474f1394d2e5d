#ifndef GESTUREHMM_FEATURES_HPP
#define GESTUREHMM_FEATURES_HPP

#include <cmath>
#include <vector>

#include "gesturehmm/core.hpp"

namespace gesturehmm {

inline constexpr std::size_t kDefaultWindow = 9;  // 0.6 s at 15 Hz
inline constexpr std::size_t kDefaultStep = 5;    // 9 - 4 samples overlap

namespace detail {

inline FeatureVector window_features(const SensorSeries& series, std::size_t begin,
                                     std::size_t len, std::size_t w1) {
  FeatureVector f{};
  for (int a = 0; a < kNumAxes; ++a) {
    double mean = 0.0;
    for (std::size_t i = 0; i < len; ++i) mean += series.samples[begin + i][a];
    mean /= static_cast<double>(len);
    double var = 0.0;
    if (len > 1) {
      for (std::size_t i = 0; i < len; ++i) {
        double d = series.samples[begin + i][a] - mean;
        var += d * d;
      }
      var /= static_cast<double>(len - 1);
    }
    double slope = len > 1 ? (series.samples[begin + len - 1][a] - series.samples[begin][a]) /
                                 static_cast<double>(w1)
                           : 0.0;
    f[static_cast<std::size_t>(a)] = mean;
    f[static_cast<std::size_t>(kNumAxes + a)] = std::sqrt(var);
    f[static_cast<std::size_t>(2 * kNumAxes + a)] = slope;
  }
  return f;
}

}  // namespace detail

// Sliding-window mean/std/slope per axis over one segment. Windows start at
// segment offsets 0, w2, 2*w2, ... and only fully contained windows are
// kept. A segment shorter than w1 yields one window over the whole segment.
inline FeatureSequence extract_features(const SensorSeries& series, const GestureSegment& segment,
                                        std::size_t w1 = kDefaultWindow,
                                        std::size_t w2 = kDefaultStep) {
  if (segment.end_index <= segment.start_index) throw ValidationError("empty segment");
  if (segment.end_index > series.size()) throw ValidationError("segment out of bounds");
  if (w1 < 2) throw ValidationError("w1 must be >= 2");
  if (w2 < 1 || w2 > w1) throw ValidationError("w2 must satisfy 1 <= w2 <= w1");

  const std::size_t length = segment.length();
  FeatureSequence seq;
  seq.has_label = true;
  seq.label = segment.label;

  if (length < w1) {
    seq.windows.push_back(detail::window_features(series, segment.start_index, length, w1));
    return seq;
  }
  for (std::size_t off = 0; off + w1 <= length; off += w2)
    seq.windows.push_back(detail::window_features(series, segment.start_index + off, w1, w1));
  return seq;
}

// Per-feature mean and sample standard deviation over training windows
// pooled across gesture types.
inline ZScoreStats fit_zscore(const std::vector<FeatureVector>& training_windows) {
  if (training_windows.size() < 2) throw ValidationError("fit_zscore needs at least 2 windows");
  ZScoreStats stats;
  const double n = static_cast<double>(training_windows.size());
  for (const auto& w : training_windows)
    for (int f = 0; f < kFeatureDim; ++f) stats.mean[static_cast<std::size_t>(f)] += w[static_cast<std::size_t>(f)];
  for (double& m : stats.mean) m /= n;
  for (const auto& w : training_windows)
    for (int f = 0; f < kFeatureDim; ++f) {
      double d = w[static_cast<std::size_t>(f)] - stats.mean[static_cast<std::size_t>(f)];
      stats.std[static_cast<std::size_t>(f)] += d * d;
    }
  for (double& s : stats.std) s = std::sqrt(s / (n - 1.0));
  return stats;
}

inline FeatureVector apply_zscore(const ZScoreStats& stats, const FeatureVector& v) {
  FeatureVector out;
  for (std::size_t f = 0; f < kFeatureDim; ++f) {
    double sd = stats.std[f] == 0.0 ? 1.0 : stats.std[f];
    out[f] = (v[f] - stats.mean[f]) / sd;
  }
  return out;
}

inline FeatureSequence apply_zscore(const ZScoreStats& stats, const FeatureSequence& seq) {
  FeatureSequence out = seq;
  for (auto& w : out.windows) w = apply_zscore(stats, w);
  return out;
}

}  // namespace gesturehmm

#endif
