#ifndef GESTUREHMM_BANK_HPP
#define GESTUREHMM_BANK_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gesturehmm/core.hpp"
#include "gesturehmm/features.hpp"
#include "gesturehmm/hmm.hpp"

namespace gesturehmm {

struct BankConfig {
  std::size_t w1 = kDefaultWindow;
  std::size_t w2 = kDefaultStep;
  std::size_t num_states = 13;
  std::size_t num_mixtures = 5;
  std::uint64_t seed = 0;
  double tol = 1e-5;
  int max_iter = 50;
  bool normalize_scores = false;  // per-window score normalization, off by default
};

// 5 per-class log-likelihoods in canonical label order.
using ScoreVector = std::array<double, kNumLabels>;

struct HmmBank {
  std::array<GestureHmm, kNumLabels> models;
  ZScoreStats zscore;
  BankConfig config;
  std::array<HmmFitReport, kNumLabels> fit_reports;
};

// Fits z-score stats on all training windows pooled, then one left-to-right
// HMM per gesture type. Deterministic given the config seed.
inline HmmBank train_bank(const std::vector<FeatureSequence>& train, const BankConfig& config) {
  std::array<std::vector<ObsSequence>, kNumLabels> by_label;
  std::vector<FeatureVector> pooled;
  for (const auto& seq : train) {
    if (!seq.has_label) throw ValidationError("train_bank: unlabeled training sequence");
    if (seq.windows.empty()) throw ValidationError("train_bank: empty training sequence");
    for (const auto& w : seq.windows) pooled.push_back(w);
  }
  ZScoreStats stats = fit_zscore(pooled);
  for (const auto& seq : train)
    by_label[static_cast<std::size_t>(seq.label)].push_back(
        to_observations(apply_zscore(stats, seq)));
  for (GestureLabel g : all_labels())
    if (by_label[static_cast<std::size_t>(g)].empty())
      throw ValidationError(std::string("train_bank: no training sequences for label '") +
                            label_name(g) + "'");

  HmmBank bank;
  bank.zscore = stats;
  bank.config = config;
  for (GestureLabel g : all_labels()) {
    const auto gi = static_cast<std::size_t>(g);
    HmmFitReport init_report;
    GestureHmm hmm = init_hmm(config.num_states, config.num_mixtures, by_label[gi],
                              mix_seed(config.seed, gi), &init_report);
    HmmFitReport bw_report;
    bank.models[gi] = baum_welch(std::move(hmm), by_label[gi], config.tol, config.max_iter,
                                 &bw_report);
    bw_report.pooled_fallback |= init_report.pooled_fallback;
    bw_report.component_count_reduced |= init_report.component_count_reduced;
    bank.fit_reports[gi] = bw_report;
  }
  return bank;
}

inline ScoreVector score(const HmmBank& bank, const FeatureSequence& gesture) {
  if (gesture.windows.empty()) throw ValidationError("score: empty gesture");
  const ObsSequence obs = to_observations(apply_zscore(bank.zscore, gesture));
  ScoreVector scores;
  for (GestureLabel g : all_labels()) {
    const auto gi = static_cast<std::size_t>(g);
    double ll = forward_log_likelihood(bank.models[gi], obs);
    scores[gi] = bank.config.normalize_scores ? ll / static_cast<double>(obs.size()) : ll;
  }
  return scores;
}

inline GestureLabel argmax_label(const ScoreVector& scores) {
  std::size_t best = 0;
  for (std::size_t g = 1; g < kNumLabels; ++g)
    if (scores[g] > scores[best]) best = g;  // ties keep the lower canonical index
  return static_cast<GestureLabel>(best);
}

inline GestureLabel classify(const HmmBank& bank, const FeatureSequence& gesture) {
  return argmax_label(score(bank, gesture));
}

}  // namespace gesturehmm

#endif
