#ifndef GESTUREHMM_SYNTH_HPP
#define GESTUREHMM_SYNTH_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gesturehmm/core.hpp"
#include "gesturehmm/numeric.hpp"

namespace gesturehmm {

// One sinusoid per axis: value(t) = offset + amplitude * sin(2 pi f t + phase),
// t in seconds within the gesture.
struct AxisMotif {
  double amplitude = 0.0;
  double frequency_hz = 1.0;
  double phase = 0.0;
  double offset = 0.0;

  double eval(double t_seconds) const {
    return offset + amplitude * std::sin(2.0 * std::numbers::pi * frequency_hz * t_seconds + phase);
  }
};

struct LabelMotif {
  std::array<AxisMotif, kNumAxes> axes;
};

struct DurationRange {
  std::size_t min_samples = 12;
  std::size_t max_samples = 40;
};

struct SynthConfig {
  std::uint64_t seed = 0;
  double sample_rate_hz = 15.0;
  // Rendered signal = base motif + separability * label motif.
  LabelMotif base;
  std::array<LabelMotif, kNumLabels> motifs;
  std::array<DurationRange, kNumLabels> durations;
  double noise_std = 0.3;
  // Unlabeled base-signal samples between consecutive gestures.
  std::size_t gap_samples = 0;
  std::size_t gestures_per_session = 30;
  std::array<std::array<double, kNumLabels>, kNumLabels> label_chain{};
  std::array<double, kNumLabels> initial_labels{};
  double separability = 1.0;

  void validate() const {
    if (noise_std < 0) throw ValidationError("noise_std must be >= 0");
    if (gestures_per_session < 1) throw ValidationError("gestures_per_session must be >= 1");
    for (const auto& d : durations)
      if (d.min_samples < 2 || d.max_samples < d.min_samples)
        throw ValidationError("invalid duration range");
    for (const auto& row : label_chain) {
      double sum = 0.0;
      for (double p : row) {
        if (p < 0) throw ValidationError("label chain entries must be >= 0");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("label chain rows must sum to 1");
    }
  }

  // Well-separated motifs under a uniform label chain.
  static SynthConfig separable(std::uint64_t seed, double separability = 2.0) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.separability = separability;
    for (int a = 0; a < kNumAxes; ++a) {
      cfg.base.axes[static_cast<std::size_t>(a)] = {0.5, 0.8 + 0.1 * a, 0.3 * a, 0.0};
    }
    for (int g = 0; g < kNumLabels; ++g)
      for (int a = 0; a < kNumAxes; ++a)
        cfg.motifs[static_cast<std::size_t>(g)].axes[static_cast<std::size_t>(a)] = {
            0.8 + 0.15 * g,
            0.6 + 0.45 * g + 0.12 * a,
            0.7 * g + 0.4 * a,
            0.3 * (g - 2)};
    for (auto& row : cfg.label_chain) row.fill(1.0 / kNumLabels);
    cfg.initial_labels.fill(1.0 / kNumLabels);
    return cfg;
  }

  // Utensiling and bite made hard to tell apart while a strong cyclic
  // rest -> utensiling -> bite -> rest chain keeps context informative.
  static SynthConfig chain_structured(std::uint64_t seed) {
    SynthConfig cfg = separable(seed, 2.0);
    const auto u = static_cast<std::size_t>(GestureLabel::Utensiling);
    const auto b = static_cast<std::size_t>(GestureLabel::Bite);
    // Identical motifs for the confusable pair; long durations keep the
    // smoothing carry-over from the previous gesture a small prefix.
    cfg.motifs[b] = cfg.motifs[u];
    cfg.durations[u] = {40, 80};
    cfg.durations[b] = cfg.durations[u];
    cfg.noise_std = 0.8;
    cfg.gap_samples = 15;
    cfg.label_chain = {{
        // rest, uten, bite, drink, other
        {0.06, 0.82, 0.02, 0.05, 0.05},  // from rest
        {0.03, 0.06, 0.88, 0.015, 0.015},  // from utensiling
        {0.84, 0.05, 0.05, 0.03, 0.03},  // from bite
        {0.60, 0.20, 0.08, 0.06, 0.06},  // from drink
        {0.50, 0.25, 0.10, 0.08, 0.07},  // from other
    }};
    cfg.initial_labels = {0.6, 0.2, 0.1, 0.05, 0.05};
    return cfg;
  }
};

struct SynthSession {
  SensorSeries series;
  std::vector<GestureSegment> segments;
};

namespace detail {

inline GestureLabel sample_discrete(const std::array<double, kNumLabels>& probs,
                                    std::mt19937_64& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t g = 0; g < kNumLabels; ++g) {
    acc += probs[g];
    if (u < acc) return static_cast<GestureLabel>(g);
  }
  return GestureLabel::Other;
}

}  // namespace detail

inline SynthSession generate_session(const SynthConfig& cfg, std::uint64_t session_seed,
                                     const std::string& session_id) {
  std::mt19937_64 rng(session_seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  SynthSession out;
  out.series.session_id = session_id;
  out.series.sample_rate_hz = cfg.sample_rate_hz;

  GestureLabel label = detail::sample_discrete(cfg.initial_labels, rng);
  for (std::size_t g = 0; g < cfg.gestures_per_session; ++g) {
    if (g > 0) {
      label = detail::sample_discrete(cfg.label_chain[static_cast<std::size_t>(label)], rng);
      for (std::size_t t = 0; t < cfg.gap_samples; ++t) {
        double secs = static_cast<double>(t) / cfg.sample_rate_hz;
        SensorSample s;
        for (int a = 0; a < kNumAxes; ++a)
          s[a] = cfg.base.axes[static_cast<std::size_t>(a)].eval(secs) +
                 cfg.noise_std * noise(rng);
        out.series.samples.push_back(s);
      }
    }
    const auto li = static_cast<std::size_t>(label);
    const auto& dur = cfg.durations[li];
    std::size_t n = std::uniform_int_distribution<std::size_t>(dur.min_samples, dur.max_samples)(rng);

    GestureSegment seg;
    seg.start_index = out.series.size();
    seg.end_index = seg.start_index + n;
    seg.label = label;

    for (std::size_t t = 0; t < n; ++t) {
      double secs = static_cast<double>(t) / cfg.sample_rate_hz;
      SensorSample s;
      for (int a = 0; a < kNumAxes; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        s[a] = cfg.base.axes[ai].eval(secs) +
               cfg.separability * cfg.motifs[li].axes[ai].eval(secs) +
               cfg.noise_std * noise(rng);
      }
      out.series.samples.push_back(s);
    }
    out.segments.push_back(seg);
  }
  return out;
}

// Deterministic given (config, sessions); each session derives its own seed.
inline std::vector<SynthSession> generate_corpus(const SynthConfig& cfg, std::size_t sessions) {
  cfg.validate();
  std::vector<SynthSession> out;
  out.reserve(sessions);
  for (std::size_t s = 0; s < sessions; ++s)
    out.push_back(generate_session(cfg, mix_seed(cfg.seed, s),
                                   "synth_" + std::to_string(s)));
  return out;
}

}  // namespace gesturehmm

#endif
