#ifndef GESTUREHMM_SEQMODEL_HPP
#define GESTUREHMM_SEQMODEL_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gesturehmm/bank.hpp"
#include "gesturehmm/core.hpp"
#include "gesturehmm/gmm.hpp"
#include "gesturehmm/numeric.hpp"

namespace gesturehmm {

inline constexpr std::size_t kMaxOrder = 6;
inline constexpr std::size_t kSeqEmissionMixtures = 7;

inline std::size_t pow5(std::size_t n) {
  std::size_t p = 1;
  while (n--) p *= kNumLabels;
  return p;
}

// Context states are N-tuples (g_1 ... g_N), g_N most recent, indexed
// lexicographically with g_1 most significant. State i can reach state j
// iff the last N-1 labels of i equal the first N-1 labels of j; each state
// therefore has exactly 5 successors: j = (i mod 5^(N-1)) * 5 + g.
struct ContextStates {
  std::size_t order = 1;

  std::size_t count() const { return pow5(order); }

  std::vector<GestureLabel> tuple(std::size_t index) const {
    std::vector<GestureLabel> t(order);
    for (std::size_t k = order; k-- > 0;) {
      t[k] = static_cast<GestureLabel>(index % kNumLabels);
      index /= kNumLabels;
    }
    return t;
  }

  std::size_t index(const std::vector<GestureLabel>& t) const {
    std::size_t idx = 0;
    for (GestureLabel g : t) idx = idx * kNumLabels + static_cast<std::size_t>(g);
    return idx;
  }

  GestureLabel most_recent(std::size_t index) const {
    return static_cast<GestureLabel>(index % kNumLabels);
  }

  std::size_t successor(std::size_t index, GestureLabel next) const {
    return (index % pow5(order - 1)) * kNumLabels + static_cast<std::size_t>(next);
  }

  bool compatible(std::size_t from, std::size_t to) const {
    return from % pow5(order - 1) == to / kNumLabels;
  }
};

inline ContextStates enumerate_states(std::size_t n) {
  if (n < 1 || n > kMaxOrder)
    throw ValidationError("order must be in [1, " + std::to_string(kMaxOrder) + "]");
  return ContextStates{n};
}

// Transition probabilities stored per state over its 5 successors, in
// canonical next-label order. Incompatible pairs are implicitly 0.
using TransitionTable = std::vector<std::array<double, kNumLabels>>;

// Laplace-smoothed n-gram transitions; counting never crosses session
// boundaries.
inline TransitionTable estimate_transitions(
    const std::vector<std::vector<GestureLabel>>& sessions, std::size_t n) {
  const ContextStates states = enumerate_states(n);
  TransitionTable counts(states.count(), {0.0, 0.0, 0.0, 0.0, 0.0});

  for (const auto& labels : sessions) {
    if (labels.size() < n + 1) continue;
    std::vector<GestureLabel> gram(labels.begin(), labels.begin() + static_cast<long>(n));
    std::size_t idx = states.index(gram);
    for (std::size_t t = n; t < labels.size(); ++t) {
      counts[idx][static_cast<std::size_t>(labels[t])] += 1.0;
      idx = states.successor(idx, labels[t]);
    }
  }

  TransitionTable table(states.count());
  for (std::size_t i = 0; i < states.count(); ++i) {
    double row_count = 0.0;
    for (double c : counts[i]) row_count += c;
    double norm = 0.0;
    for (std::size_t g = 0; g < kNumLabels; ++g) {
      table[i][g] = (counts[i][g] + 1.0) / (row_count + kNumLabels);
      norm += table[i][g];
    }
    for (double& p : table[i]) p /= norm;  // guards rounding only
  }
  return table;
}

inline std::vector<double> estimate_priors(const std::vector<std::vector<GestureLabel>>& sessions,
                                           std::size_t n) {
  const ContextStates states = enumerate_states(n);
  std::vector<double> counts(states.count(), 0.0);
  double total = 0.0;
  for (const auto& labels : sessions) {
    if (labels.size() < n) continue;
    for (std::size_t t = 0; t + n <= labels.size(); ++t) {
      std::vector<GestureLabel> gram(labels.begin() + static_cast<long>(t),
                                     labels.begin() + static_cast<long>(t + n));
      counts[states.index(gram)] += 1.0;
      total += 1.0;
    }
  }
  std::vector<double> priors(states.count());
  double norm = 0.0;
  for (std::size_t i = 0; i < states.count(); ++i) {
    priors[i] = (counts[i] + 1.0) / (total + static_cast<double>(states.count()));
    norm += priors[i];
  }
  for (double& p : priors) p /= norm;
  return priors;
}

struct SeqEmissionReport {
  std::array<bool, kNumLabels> reduced{};
  std::array<std::size_t, kNumLabels> mixture_sizes{};
};

// One 5-dimensional mixture per most-recent label; all context states
// ending in the same label share it.
inline std::array<GaussianMixture, kNumLabels> fit_emissions(
    const std::vector<std::pair<ScoreVector, GestureLabel>>& scored, std::uint64_t seed,
    std::size_t mixtures = kSeqEmissionMixtures, SeqEmissionReport* report = nullptr) {
  std::array<std::vector<std::vector<double>>, kNumLabels> by_label;
  for (const auto& [scores, label] : scored)
    by_label[static_cast<std::size_t>(label)].emplace_back(scores.begin(), scores.end());

  SeqEmissionReport local;
  std::array<GaussianMixture, kNumLabels> out;
  for (GestureLabel g : all_labels()) {
    const auto gi = static_cast<std::size_t>(g);
    const auto& data = by_label[gi];
    if (data.empty())
      throw ValidationError(std::string("fit_emissions: no score vectors for label '") +
                            label_name(g) + "'");
    std::size_t m = mixtures;
    if (data.size() < m) {
      m = data.size();
      local.reduced[gi] = true;
    }
    local.mixture_sizes[gi] = m;
    out[gi] = gmm_fit(data, m, mix_seed(seed, gi));
  }
  if (report) *report = local;
  return out;
}

struct SequenceModel {
  std::size_t order = 1;
  std::vector<double> priors;                           // 5^order
  TransitionTable transitions;                          // successor-compressed
  std::array<GaussianMixture, kNumLabels> emissions;    // tied by most-recent label
  SeqEmissionReport emission_report;

  ContextStates states() const { return ContextStates{order}; }

  // Dense accessor; 0 for incompatible pairs.
  double transition(std::size_t from, std::size_t to) const {
    const ContextStates s = states();
    if (!s.compatible(from, to)) return 0.0;
    return transitions[from][to % kNumLabels];
  }
};

inline SequenceModel fit_sequence_model(const std::vector<std::vector<GestureLabel>>& sessions,
                                        const std::vector<std::pair<ScoreVector, GestureLabel>>& scored,
                                        std::size_t n, std::uint64_t seed,
                                        std::size_t mixtures = kSeqEmissionMixtures) {
  SequenceModel model;
  model.order = n;
  model.priors = estimate_priors(sessions, n);
  model.transitions = estimate_transitions(sessions, n);
  model.emissions = fit_emissions(scored, seed, mixtures, &model.emission_report);
  return model;
}

// Log-space Viterbi over the 5^order-state first-order chain; the decoded
// state's most-recent label is the prediction at each step. Ties break
// toward the lower state index.
inline std::vector<GestureLabel> decode_session(const SequenceModel& model,
                                                const std::vector<ScoreVector>& session_scores) {
  if (session_scores.empty()) throw ValidationError("decode_session: empty session");
  for (const auto& sv : session_scores)
    for (double v : sv)
      if (!std::isfinite(v)) throw ValidationError("decode_session: non-finite score vector");

  const ContextStates states = model.states();
  const std::size_t s_count = states.count();
  const std::size_t t_len = session_scores.size();
  const std::size_t suffix_mod = pow5(model.order - 1);

  // Tied emissions: evaluate each of the 5 mixtures once per step.
  std::vector<std::array<double, kNumLabels>> em(t_len);
  for (std::size_t t = 0; t < t_len; ++t) {
    std::vector<double> x(session_scores[t].begin(), session_scores[t].end());
    for (std::size_t g = 0; g < kNumLabels; ++g)
      em[t][g] = gmm_log_pdf(model.emissions[g], x);
  }

  std::vector<std::vector<double>> delta(t_len, std::vector<double>(s_count, kNegInf));
  std::vector<std::vector<std::size_t>> back(t_len, std::vector<std::size_t>(s_count, 0));
  for (std::size_t i = 0; i < s_count; ++i)
    delta[0][i] = std::log(model.priors[i]) +
                  em[0][static_cast<std::size_t>(states.most_recent(i))];
  for (std::size_t t = 1; t < t_len; ++t) {
    for (std::size_t j = 0; j < s_count; ++j) {
      const std::size_t prefix = j / kNumLabels;
      const std::size_t next_g = j % kNumLabels;
      double best = kNegInf;
      std::size_t arg = 0;
      for (std::size_t y = 0; y < kNumLabels; ++y) {
        const std::size_t i = y * suffix_mod + prefix;
        double cand = delta[t - 1][i] + std::log(model.transitions[i][next_g]);
        if (cand > best) {
          best = cand;
          arg = i;
        }
      }
      delta[t][j] = best + em[t][next_g];
      back[t][j] = arg;
    }
  }
  double best = kNegInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < s_count; ++i)
    if (delta[t_len - 1][i] > best) {
      best = delta[t_len - 1][i];
      arg = i;
    }
  std::vector<std::size_t> path(t_len);
  path[t_len - 1] = arg;
  for (std::size_t t = t_len - 1; t > 0; --t) path[t - 1] = back[t][path[t]];

  std::vector<GestureLabel> labels(t_len);
  for (std::size_t t = 0; t < t_len; ++t) labels[t] = states.most_recent(path[t]);
  return labels;
}

struct ParamCount {
  std::size_t prior = 0;
  std::size_t transition = 0;
  std::size_t emission = 0;
  std::size_t total = 0;
};

inline ParamCount param_count(std::size_t n, std::size_t d = kNumLabels,
                              std::size_t m = kSeqEmissionMixtures) {
  if (n < 1) throw ValidationError("param_count: order must be >= 1");
  ParamCount c;
  c.prior = pow5(n);
  c.transition = kNumLabels * pow5(n);
  c.emission = 2 * kNumLabels * d * m;  // means and diagonal covariances
  c.total = c.prior + c.transition + c.emission;
  return c;
}

}  // namespace gesturehmm

#endif
