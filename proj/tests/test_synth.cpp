#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "gesturehmm/io.hpp"
#include "gesturehmm/synth.hpp"

using namespace gesturehmm;

TEST_CASE("generation is deterministic down to file bytes") {
  auto cfg = SynthConfig::separable(11);
  auto a = generate_corpus(cfg, 4);
  auto b = generate_corpus(cfg, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    REQUIRE(a[s].series.size() == b[s].series.size());
    for (std::size_t t = 0; t < a[s].series.size(); ++t)
      for (int ax = 0; ax < kNumAxes; ++ax)
        CHECK(a[s].series.samples[t][ax] == b[s].series.samples[t][ax]);
  }

  auto dir = std::filesystem::temp_directory_path() / "gesturehmm_synth_det";
  std::filesystem::create_directories(dir);
  auto read_bytes = [&](const std::string& name) {
    std::ifstream in(dir / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  write_series(a[0].series, (dir / "a.csv").string());
  write_series(b[0].series, (dir / "b.csv").string());
  CHECK(read_bytes("a.csv") == read_bytes("b.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("noiseless single-label rendering tiles the exact motif") {
  auto cfg = SynthConfig::separable(5);
  cfg.noise_std = 0.0;
  // Force the chain onto one label.
  for (auto& row : cfg.label_chain) {
    row.fill(0.0);
    row[static_cast<std::size_t>(GestureLabel::Bite)] = 1.0;
  }
  cfg.initial_labels.fill(0.0);
  cfg.initial_labels[static_cast<std::size_t>(GestureLabel::Bite)] = 1.0;
  cfg.gestures_per_session = 5;

  auto sessions = generate_corpus(cfg, 1);
  REQUIRE(sessions.size() == 1);
  const auto& session = sessions[0];
  CHECK(session.segments.size() == 5);
  std::size_t expected_start = 0;
  const auto bi = static_cast<std::size_t>(GestureLabel::Bite);
  for (const auto& seg : session.segments) {
    CHECK(seg.start_index == expected_start);  // segments tile the session
    CHECK(seg.label == GestureLabel::Bite);
    for (std::size_t t = seg.start_index; t < seg.end_index; ++t) {
      double secs = static_cast<double>(t - seg.start_index) / cfg.sample_rate_hz;
      for (int a = 0; a < kNumAxes; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        double want = cfg.base.axes[ai].eval(secs) +
                      cfg.separability * cfg.motifs[bi].axes[ai].eval(secs);
        CHECK_THAT(session.series.samples[t][a], Catch::Matchers::WithinAbs(want, 1e-12));
      }
    }
    expected_start = seg.end_index;
  }
  CHECK(expected_start == session.series.size());
}

TEST_CASE("segment labels follow the sampled chain exactly") {
  auto cfg = SynthConfig::chain_structured(3);
  auto sessions = generate_corpus(cfg, 10);
  for (const auto& s : sessions) {
    CHECK(s.segments.size() == cfg.gestures_per_session);
    validate_segments(s.segments, s.series.size());
    for (const auto& seg : s.segments)
      CHECK(seg.length() >= cfg.durations[static_cast<std::size_t>(seg.label)].min_samples);
  }
}

TEST_CASE("sticky chain shows up in the empirical bigram counts") {
  auto cfg = SynthConfig::separable(21);
  for (std::size_t g = 0; g < kNumLabels; ++g) {
    cfg.label_chain[g].fill(0.1 / 4.0);
    cfg.label_chain[g][g] = 0.9;
  }
  cfg.gestures_per_session = 50;
  auto sessions = generate_corpus(cfg, 40);

  std::size_t self = 0, total = 0;
  for (const auto& s : sessions)
    for (std::size_t i = 1; i < s.segments.size(); ++i) {
      ++total;
      if (s.segments[i].label == s.segments[i - 1].label) ++self;
    }
  double frac = static_cast<double>(self) / static_cast<double>(total);
  // 0.9 within a few multinomial standard errors of n ~ 2000.
  CHECK_THAT(frac, Catch::Matchers::WithinAbs(0.9, 0.04));
}

TEST_CASE("invalid chains are rejected") {
  auto cfg = SynthConfig::separable(1);
  cfg.label_chain[2][0] += 0.5;  // row no longer stochastic
  CHECK_THROWS_AS(generate_corpus(cfg, 1), ValidationError);
}
