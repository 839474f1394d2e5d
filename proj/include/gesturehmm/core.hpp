#ifndef GESTUREHMM_CORE_HPP
#define GESTUREHMM_CORE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gesturehmm {

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Canonical label order; used for tie-breaking and serialization everywhere.
enum class GestureLabel : int { Rest = 0, Utensiling = 1, Bite = 2, Drink = 3, Other = 4 };

inline constexpr int kNumLabels = 5;

inline constexpr std::array<GestureLabel, kNumLabels> all_labels() {
  return {GestureLabel::Rest, GestureLabel::Utensiling, GestureLabel::Bite,
          GestureLabel::Drink, GestureLabel::Other};
}

inline const char* label_name(GestureLabel g) {
  switch (g) {
    case GestureLabel::Rest: return "rest";
    case GestureLabel::Utensiling: return "utensiling";
    case GestureLabel::Bite: return "bite";
    case GestureLabel::Drink: return "drink";
    case GestureLabel::Other: return "other";
  }
  return "?";
}

inline GestureLabel parse_label(const std::string& token) {
  for (GestureLabel g : all_labels())
    if (token == label_name(g)) return g;
  throw ValidationError("unknown label token: '" + token + "'");
}

inline constexpr int kNumAxes = 6;

// One 6-axis reading: accelerometer x,y,z then gyroscope yaw,pitch,roll.
struct SensorSample {
  std::array<double, kNumAxes> v{};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  bool finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

struct SensorSeries {
  std::string session_id;
  double sample_rate_hz = 15.0;
  std::vector<SensorSample> samples;

  std::size_t size() const { return samples.size(); }

  void validate() const {
    if (samples.empty()) throw ValidationError("series '" + session_id + "' is empty");
    if (!(sample_rate_hz > 0)) throw ValidationError("sample rate must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (!samples[i].finite())
        throw ValidationError("non-finite sample at index " + std::to_string(i));
  }
};

// Half-open [start,end) span of one session.
struct GestureSegment {
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  GestureLabel label = GestureLabel::Rest;

  std::size_t length() const { return end_index - start_index; }
};

inline void validate_segments(const std::vector<GestureSegment>& segments,
                              std::size_t series_length) {
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (s.end_index <= s.start_index)
      throw ValidationError("segment " + std::to_string(i) + ": end before start");
    if (s.end_index > series_length)
      throw ValidationError("segment " + std::to_string(i) + ": out of bounds");
    if (s.start_index < prev_end)
      throw ValidationError("segment " + std::to_string(i) + ": overlaps previous segment");
    prev_end = s.end_index;
  }
}

inline constexpr int kFeatureDim = 18;

// Layout: [6 means | 6 stds | 6 slopes], axis order as in SensorSample.
using FeatureVector = std::array<double, kFeatureDim>;

struct FeatureSequence {
  bool has_label = false;
  GestureLabel label = GestureLabel::Rest;
  std::vector<FeatureVector> windows;

  std::size_t size() const { return windows.size(); }
};

struct ZScoreStats {
  std::array<double, kFeatureDim> mean{};
  std::array<double, kFeatureDim> std{};  // raw values; 0 substituted by 1 at application
};

}  // namespace gesturehmm

#endif
