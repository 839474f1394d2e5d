#ifndef GESTUREHMM_HMM_HPP
#define GESTUREHMM_HMM_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gesturehmm/core.hpp"
#include "gesturehmm/gmm.hpp"
#include "gesturehmm/numeric.hpp"

namespace gesturehmm {

// Observation sequence as plain vectors so the same machinery serves the
// 18-dim gesture features and lower-dimensional test models.
using Observation = std::vector<double>;
using ObsSequence = std::vector<Observation>;

inline ObsSequence to_observations(const FeatureSequence& seq) {
  ObsSequence out;
  out.reserve(seq.windows.size());
  for (const auto& w : seq.windows) out.emplace_back(w.begin(), w.end());
  return out;
}

// Left-to-right with skip: state i may go to i, i+1, i+2, clamped at the
// final state, which self-loops. State 0 is the unique start state.
struct HmmTopology {
  std::size_t num_states = 1;

  bool allowed(std::size_t from, std::size_t to) const {
    return to >= from && to <= from + 2 && to < num_states;
  }
};

struct GestureHmm {
  HmmTopology topology;
  std::vector<double> pi;                   // (1, 0, ..., 0), fixed
  std::vector<std::vector<double>> a;       // row-stochastic, zero off-mask
  std::vector<GaussianMixture> emissions;   // one mixture per state

  std::size_t num_states() const { return topology.num_states; }

  void validate() const {
    const std::size_t n = num_states();
    if (pi.size() != n || a.size() != n || emissions.size() != n)
      throw ValidationError("hmm: inconsistent sizes");
    if (pi[0] != 1.0)
      throw ValidationError("hmm: pi must be one-hot on state 0");
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!topology.allowed(i, j) && a[i][j] != 0.0)
          throw ValidationError("hmm: transition outside topology mask");
        row += a[i][j];
      }
      if (std::abs(row - 1.0) > 1e-12)
        throw ValidationError("hmm: row " + std::to_string(i) + " not stochastic");
      emissions[i].validate();
    }
  }
};

struct HmmFitReport {
  int iterations = 0;
  bool pooled_fallback = false;            // some state had no windows of its own
  bool component_count_reduced = false;
  std::vector<double> log_likelihood_trace;  // aggregate per iteration
  double final_log_likelihood = 0.0;
};

// Uniform temporal segmentation init: A uniform over the allowed mask, each
// state's mixture fitted on its equal share of every sequence.
inline GestureHmm init_hmm(std::size_t n, std::size_t m, const std::vector<ObsSequence>& sequences,
                           std::uint64_t seed, HmmFitReport* report = nullptr) {
  if (n < 1) throw ValidationError("init_hmm: N must be >= 1");
  if (sequences.empty()) throw ValidationError("init_hmm: no training sequences");
  for (const auto& s : sequences)
    if (s.empty()) throw ValidationError("init_hmm: empty sequence");

  GestureHmm hmm;
  hmm.topology.num_states = n;
  hmm.pi.assign(n, 0.0);
  hmm.pi[0] = 1.0;
  hmm.a.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (hmm.topology.allowed(i, j)) ++count;
    for (std::size_t j = 0; j < n; ++j)
      if (hmm.topology.allowed(i, j)) hmm.a[i][j] = 1.0 / static_cast<double>(count);
  }

  std::vector<ObsSequence> pools(n);
  ObsSequence all_windows;
  for (const auto& seq : sequences) {
    const std::size_t t_len = seq.size();
    for (std::size_t t = 0; t < t_len; ++t) {
      std::size_t state = t * n / t_len;
      pools[state].push_back(seq[t]);
      all_windows.push_back(seq[t]);
    }
  }

  HmmFitReport local;
  hmm.emissions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ObsSequence* pool = &pools[i];
    if (pool->size() < m || pool->empty()) {
      local.pooled_fallback = true;
      pool = &all_windows;
    }
    std::size_t m_eff = m;
    if (pool->size() < m_eff) {
      m_eff = pool->size();
      local.component_count_reduced = true;
    }
    GmmFitReport gr;
    hmm.emissions[i] = gmm_fit(*pool, m_eff, mix_seed(seed, i), 1e-6, 200, &gr);
    local.component_count_reduced |= gr.component_count_reduced;
  }
  if (report) *report = local;
  return hmm;
}

namespace detail {

inline std::vector<std::vector<double>> emission_log_probs(const GestureHmm& hmm,
                                                           const ObsSequence& seq) {
  const std::size_t n = hmm.num_states();
  std::vector<std::vector<double>> logb(seq.size(), std::vector<double>(n));
  for (std::size_t t = 0; t < seq.size(); ++t)
    for (std::size_t i = 0; i < n; ++i)
      logb[t][i] = gmm_log_pdf(hmm.emissions[i], seq[t]);
  return logb;
}

}  // namespace detail

// Exact log P(O | lambda) via the log-space forward recursion.
inline double forward_log_likelihood(const GestureHmm& hmm, const ObsSequence& seq) {
  if (seq.empty()) throw ValidationError("forward: empty sequence");
  const std::size_t n = hmm.num_states();
  const auto logb = detail::emission_log_probs(hmm, seq);

  std::vector<double> alpha(n), next(n);
  for (std::size_t i = 0; i < n; ++i)
    alpha[i] = (hmm.pi[i] > 0 ? std::log(hmm.pi[i]) : kNegInf) + logb[0][i];
  std::vector<double> terms(n);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i)
        terms[i] = hmm.a[i][j] > 0 ? alpha[i] + std::log(hmm.a[i][j]) : kNegInf;
      next[j] = log_sum_exp(terms) + logb[t][j];
    }
    alpha.swap(next);
  }
  return log_sum_exp(alpha);
}

// Most probable state path and its joint log-probability. Ties break toward
// the lower state index.
inline std::pair<std::vector<std::size_t>, double> viterbi(const GestureHmm& hmm,
                                                           const ObsSequence& seq) {
  if (seq.empty()) throw ValidationError("viterbi: empty sequence");
  const std::size_t n = hmm.num_states();
  const std::size_t t_len = seq.size();
  const auto logb = detail::emission_log_probs(hmm, seq);

  std::vector<std::vector<double>> delta(t_len, std::vector<double>(n, kNegInf));
  std::vector<std::vector<std::size_t>> back(t_len, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    delta[0][i] = (hmm.pi[i] > 0 ? std::log(hmm.pi[i]) : kNegInf) + logb[0][i];
  for (std::size_t t = 1; t < t_len; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      double best = kNegInf;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (hmm.a[i][j] <= 0) continue;
        double cand = delta[t - 1][i] + std::log(hmm.a[i][j]);
        if (cand > best) {
          best = cand;
          arg = i;
        }
      }
      delta[t][j] = best + logb[t][j];
      back[t][j] = arg;
    }
  }
  double best = kNegInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (delta[t_len - 1][i] > best) {
      best = delta[t_len - 1][i];
      arg = i;
    }
  std::vector<std::size_t> path(t_len);
  path[t_len - 1] = arg;
  for (std::size_t t = t_len - 1; t > 0; --t) path[t - 1] = back[t][path[t]];
  return {path, best};
}

namespace detail {

struct ScaledPass {
  std::vector<std::vector<double>> alpha;  // normalized per step
  std::vector<std::vector<double>> beta;   // matching scale
  std::vector<double> scale;               // c_t
  double log_likelihood = 0.0;
};

// Rabiner-scaled forward-backward. Emission log-probs are max-shifted per
// step before exponentiating; the shifts fold into the log-likelihood.
inline ScaledPass scaled_forward_backward(const GestureHmm& hmm,
                                          const std::vector<std::vector<double>>& logb,
                                          std::size_t seq_index) {
  const std::size_t n = hmm.num_states();
  const std::size_t t_len = logb.size();

  std::vector<std::vector<double>> b(t_len, std::vector<double>(n));
  double shift_total = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) {
    double m = kNegInf;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, logb[t][i]);
    if (m == kNegInf)
      throw NumericalError("sequence " + std::to_string(seq_index) +
                           ": all emission densities vanished at step " + std::to_string(t));
    shift_total += m;
    for (std::size_t i = 0; i < n; ++i) b[t][i] = std::exp(logb[t][i] - m);
  }

  ScaledPass pass;
  pass.alpha.assign(t_len, std::vector<double>(n, 0.0));
  pass.beta.assign(t_len, std::vector<double>(n, 0.0));
  pass.scale.assign(t_len, 0.0);

  for (std::size_t i = 0; i < n; ++i) pass.alpha[0][i] = hmm.pi[i] * b[0][i];
  for (std::size_t t = 0; t < t_len; ++t) {
    if (t > 0)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += pass.alpha[t - 1][i] * hmm.a[i][j];
        pass.alpha[t][j] = acc * b[t][j];
      }
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += pass.alpha[t][i];
    if (c <= 0.0)
      throw NumericalError("sequence " + std::to_string(seq_index) +
                           ": zero total likelihood at step " + std::to_string(t));
    pass.scale[t] = c;
    for (std::size_t i = 0; i < n; ++i) pass.alpha[t][i] /= c;
  }

  for (std::size_t i = 0; i < n; ++i) pass.beta[t_len - 1][i] = 1.0;
  for (std::size_t t = t_len - 1; t > 0; --t)
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        acc += hmm.a[i][j] * b[t][j] * pass.beta[t][j];
      pass.beta[t - 1][i] = acc / pass.scale[t];
    }

  pass.log_likelihood = shift_total;
  for (double c : pass.scale) pass.log_likelihood += std::log(c);
  return pass;
}

}  // namespace detail

// Baum-Welch over multiple sequences. A is re-estimated under the topology
// mask; each state's mixture gets one responsibility-weighted EM pass per
// outer iteration; pi stays fixed at one-hot.
inline GestureHmm baum_welch(GestureHmm hmm, const std::vector<ObsSequence>& sequences,
                             double tol = 1e-5, int max_iter = 50,
                             HmmFitReport* report = nullptr) {
  if (sequences.empty()) throw ValidationError("baum_welch: no sequences");
  hmm.validate();
  const std::size_t n = hmm.num_states();

  std::size_t total_windows = 0;
  for (const auto& s : sequences) total_windows += s.size();

  // All windows flattened once; per-state gamma weights index into this.
  ObsSequence flat;
  flat.reserve(total_windows);
  for (const auto& s : sequences) flat.insert(flat.end(), s.begin(), s.end());

  HmmFitReport local;
  double prev_mean_ll = kNegInf;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<std::vector<double>> xi_sum(n, std::vector<double>(n, 0.0));
    std::vector<double> gamma_row_sum(n, 0.0);
    std::vector<std::vector<double>> gamma_flat(n, std::vector<double>(total_windows, 0.0));

    double total_ll = 0.0;
    std::size_t flat_off = 0;
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      const auto& seq = sequences[s];
      const auto logb = detail::emission_log_probs(hmm, seq);
      auto pass = detail::scaled_forward_backward(hmm, logb, s);
      total_ll += pass.log_likelihood;
      const std::size_t t_len = seq.size();

      // b re-derived with the same per-step shift used inside the pass.
      for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
          double g = pass.alpha[t][i] * pass.beta[t][i];
          gamma_flat[i][flat_off + t] = g;
          if (t + 1 < t_len) gamma_row_sum[i] += g;
        }
      }
      for (std::size_t t = 0; t + 1 < t_len; ++t) {
        double m = kNegInf;
        for (std::size_t j = 0; j < n; ++j) m = std::max(m, logb[t + 1][j]);
        for (std::size_t i = 0; i < n; ++i) {
          if (pass.alpha[t][i] == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (hmm.a[i][j] <= 0) continue;
            double bt1 = std::exp(logb[t + 1][j] - m);
            xi_sum[i][j] += pass.alpha[t][i] * hmm.a[i][j] * bt1 * pass.beta[t + 1][j] /
                            pass.scale[t + 1];
          }
        }
      }
      flat_off += t_len;
    }

    local.log_likelihood_trace.push_back(total_ll);
    local.iterations = iter + 1;
    const double mean_ll = total_ll / static_cast<double>(total_windows);
    if (iter > 0 && mean_ll - prev_mean_ll < tol) {
      prev_mean_ll = mean_ll;
      break;
    }
    prev_mean_ll = mean_ll;

    // M-step: transitions.
    for (std::size_t i = 0; i < n; ++i) {
      if (gamma_row_sum[i] <= 0.0) continue;  // state never occupied before the end
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += xi_sum[i][j];
      if (row <= 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        hmm.a[i][j] = hmm.topology.allowed(i, j) ? xi_sum[i][j] / row : 0.0;
      double norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) norm += hmm.a[i][j];
      for (std::size_t j = 0; j < n; ++j) hmm.a[i][j] /= norm;
    }

    // M-step: emissions.
    for (std::size_t i = 0; i < n; ++i) {
      double mass = 0.0;
      for (double g : gamma_flat[i]) mass += g;
      if (mass <= 1e-12) continue;
      gmm_weighted_em_step(hmm.emissions[i], flat, gamma_flat[i]);
    }
  }

  local.final_log_likelihood = local.log_likelihood_trace.empty()
                                   ? kNegInf
                                   : local.log_likelihood_trace.back();
  if (report) *report = local;
  hmm.validate();
  return hmm;
}

}  // namespace gesturehmm

#endif
