// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs entirely on synthetic data.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gesturehmm/gesturehmm.hpp"
#include "oracles.hpp"

using namespace gesturehmm;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string description)
      : number_(number), description_(std::move(description)),
        start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& detail = "") {
    if (!ok) {
      failed_ = true;
      if (!detail.empty() && detail_.empty()) detail_ = detail;
    }
  }

  void finish() {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("%s  criterion %d: %s (%.2fs)%s%s\n", failed_ ? "FAIL" : "PASS", number_,
                description_.c_str(), secs, detail_.empty() ? "" : " -- ", detail_.c_str());
    if (failed_) ++g_failures;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  int number_;
  std::string description_;
  std::chrono::steady_clock::time_point start_;
  bool failed_ = false;
  std::string detail_;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion1_forward_oracle() {
  Criterion c(1, "forward log-likelihood matches brute-force path sum (rel 1e-9, 100 trials)");
  std::mt19937_64 rng(0xF0F0);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 4, m = 1 + rng() % 2, d = 1 + rng() % 3;
    std::size_t t_len = 1 + rng() % 6;
    auto hmm = oracles::random_hmm(rng, n, m, d);
    auto seq = oracles::random_sequence(rng, t_len, d);
    double fast = forward_log_likelihood(hmm, seq);
    double slow = oracles::brute_force_forward(hmm, seq);
    double rel = std::abs(fast - slow) / std::max(1e-300, std::abs(slow));
    c.check(rel <= 1e-9, "trial " + std::to_string(trial) + " rel err " + std::to_string(rel));
  }
  c.check(c.elapsed() < 10.0, "runtime budget exceeded");
  c.finish();
}

void criterion2_viterbi_oracle() {
  Criterion c(2, "viterbi path equals brute-force argmax path (100 trials)");
  std::mt19937_64 rng(0xAB1E);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 4, m = 1 + rng() % 2, d = 1 + rng() % 3;
    std::size_t t_len = 1 + rng() % 6;
    auto hmm = oracles::random_hmm(rng, n, m, d);
    auto seq = oracles::random_sequence(rng, t_len, d);
    auto [path, lp] = viterbi(hmm, seq);
    auto [bpath, blp] = oracles::brute_force_viterbi(hmm, seq);
    c.check(path == bpath, "trial " + std::to_string(trial) + " path mismatch");
  }
  c.check(c.elapsed() < 10.0, "runtime budget exceeded");
  c.finish();
}

SequenceModel random_sequence_model(std::mt19937_64& rng, std::size_t order) {
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  SequenceModel model;
  model.order = order;
  const std::size_t count = pow5(order);
  model.priors.resize(count);
  double psum = 0.0;
  for (auto& p : model.priors) psum += (p = unit(rng));
  for (auto& p : model.priors) p /= psum;
  model.transitions.resize(count);
  for (auto& row : model.transitions) {
    double rsum = 0.0;
    for (auto& p : row) rsum += (p = unit(rng));
    for (auto& p : row) p /= rsum;
  }
  std::uniform_real_distribution<double> mdist(-3.0, 3.0);
  std::uniform_real_distribution<double> vdist(0.4, 1.5);
  for (std::size_t g = 0; g < kNumLabels; ++g) {
    GaussianMixture gm;
    gm.dimension = kNumLabels;
    MixtureComponent comp;
    comp.weight = 1.0;
    for (int f = 0; f < kNumLabels; ++f) {
      comp.gaussian.mean.push_back(mdist(rng));
      comp.gaussian.variance.push_back(vdist(rng));
    }
    gm.components.push_back(std::move(comp));
    model.emissions[g] = gm;
  }
  return model;
}

void criterion3_decode_oracle() {
  Criterion c(3, "context decode equals exhaustive compatible-path argmax (50 trials)");
  std::mt19937_64 rng(0xDECD);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t order = 1 + rng() % 2;
    std::size_t t_len = 1 + rng() % 5;
    auto model = random_sequence_model(rng, order);
    std::vector<ScoreVector> scores(t_len);
    std::uniform_real_distribution<double> dist(-4.0, 2.0);
    for (auto& sv : scores)
      for (double& v : sv) v = dist(rng);
    c.check(decode_session(model, scores) == oracles::brute_force_decode(model, scores),
            "trial " + std::to_string(trial) + " mismatch");
  }
  c.check(c.elapsed() < 30.0, "runtime budget exceeded");
  c.finish();
}

void criterion4_em_monotonicity() {
  Criterion c(4, "gmm_fit and baum_welch log-likelihood non-decreasing (20 runs each)");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed * 31 + 7);
    std::normal_distribution<double> n1(0.0, 1.0), n2(5.0, 2.0);
    std::vector<std::vector<double>> data;
    for (int i = 0; i < 120; ++i)
      data.push_back({i % 2 == 0 ? n1(rng) : n2(rng), i % 2 == 0 ? n2(rng) : n1(rng)});
    GmmFitReport report;
    gmm_fit(data, 3, seed, 1e-10, 80, &report);
    for (std::size_t i = 1; i < report.log_likelihood_trace.size(); ++i)
      c.check(report.log_likelihood_trace[i] >= report.log_likelihood_trace[i - 1] - 1e-8,
              "gmm seed " + std::to_string(seed));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed + 500);
    std::vector<ObsSequence> seqs;
    for (int s = 0; s < 8; ++s) seqs.push_back(oracles::random_sequence(rng, 5 + rng() % 5, 2));
    HmmFitReport report;
    auto hmm = init_hmm(3, 2, seqs, seed);
    baum_welch(hmm, seqs, 1e-9, 15, &report);
    for (std::size_t i = 1; i < report.log_likelihood_trace.size(); ++i)
      c.check(report.log_likelihood_trace[i] >= report.log_likelihood_trace[i - 1] - 1e-6,
              "baum_welch seed " + std::to_string(seed));
  }
  c.finish();
}

void criterion5_laplace() {
  Criterion c(5, "Laplace estimators reproduce hand counts and stay stochastic");
  using enum GestureLabel;
  auto table = estimate_transitions({{Bite, Bite, Bite, Rest}}, 1);
  const auto b = static_cast<std::size_t>(Bite);
  c.check(std::abs(table[b][static_cast<std::size_t>(Bite)] - 3.0 / 8.0) < 1e-15);
  c.check(std::abs(table[b][static_cast<std::size_t>(Rest)] - 1.0 / 4.0) < 1e-15);
  c.check(std::abs(table[b][static_cast<std::size_t>(Drink)] - 1.0 / 8.0) < 1e-15);

  auto priors = estimate_priors({{Bite, Bite, Rest}}, 1);
  c.check(std::abs(priors[static_cast<std::size_t>(Bite)] - 3.0 / 8.0) < 1e-15);
  c.check(std::abs(priors[static_cast<std::size_t>(Rest)] - 2.0 / 8.0) < 1e-15);
  c.check(std::abs(priors[static_cast<std::size_t>(Other)] - 1.0 / 8.0) < 1e-15);

  std::mt19937_64 rng(17);
  std::vector<std::vector<GestureLabel>> sessions;
  for (int s = 0; s < 6; ++s) {
    std::vector<GestureLabel> labels;
    for (int t = 0; t < 15; ++t) labels.push_back(static_cast<GestureLabel>(rng() % 5));
    sessions.push_back(labels);
  }
  for (std::size_t n : {1u, 2u, 3u}) {
    auto t2 = estimate_transitions(sessions, n);
    for (const auto& row : t2) {
      double sum = 0.0;
      for (double p : row) sum += p;
      c.check(std::abs(sum - 1.0) <= 1e-12, "row not stochastic");
    }
    auto p2 = estimate_priors(sessions, n);
    double sum = 0.0;
    for (double p : p2) sum += p;
    c.check(std::abs(sum - 1.0) <= 1e-12, "priors not stochastic");
  }
  for (double p : estimate_priors({}, 2)) c.check(std::abs(p - 1.0 / 25.0) < 1e-15);
  for (const auto& row : estimate_transitions({}, 2))
    for (double p : row) c.check(std::abs(p - 0.2) < 1e-15);
  c.finish();
}

void criterion6_param_count() {
  Criterion c(6, "parameter counting reproduces all six published totals");
  const std::size_t expected[6] = {380, 500, 1100, 4100, 19100, 94100};
  for (std::size_t n = 1; n <= 6; ++n) {
    auto pc = param_count(n, 5, 7);
    c.check(pc.total == expected[n - 1],
            "order " + std::to_string(n) + " got " + std::to_string(pc.total));
  }
  c.finish();
}

void criterion7_end_to_end() {
  Criterion c(7, "synthetic end-to-end: HMM-S >= 0.95 separable; HMM-1 >= HMM-S + 2pts on chain");

  // Separable corpus: >= 200 train + 200 test gestures per class.
  {
    auto cfg = SynthConfig::separable(0x5EED);
    cfg.gestures_per_session = 40;
    auto corpus = featurize(generate_corpus(cfg, 60));
    auto pool = corpus.flat();
    auto split = gesturehmm::detail::sample_split(pool, 200, 200, 0xCAFE);
    BankConfig bc;
    bc.num_states = 5;
    bc.num_mixtures = 2;
    bc.seed = 0xBEEF;
    auto bank = train_bank(split.train, bc);
    std::size_t correct = 0;
    for (const auto& g : split.test)
      if (classify(bank, g) == g.label) ++correct;
    double acc = static_cast<double>(correct) / static_cast<double>(split.test.size());
    c.check(acc >= 0.95, "separable accuracy " + std::to_string(acc));
  }

  // Chain-structured corpus: context decoding must beat the bank alone.
  {
    auto cfg = SynthConfig::chain_structured(0x1CEB);
    cfg.gestures_per_session = 40;
    auto corpus = featurize(generate_corpus(cfg, 60));
    const std::size_t half = corpus.sessions.size() / 2;

    std::vector<FeatureSequence> train;
    std::vector<std::vector<GestureLabel>> train_labels;
    for (std::size_t s = 0; s < half; ++s) {
      std::vector<GestureLabel> labels;
      for (const auto& g : corpus.sessions[s]) {
        train.push_back(g);
        labels.push_back(g.label);
      }
      train_labels.push_back(std::move(labels));
    }
    BankConfig bc;
    bc.num_states = 5;
    bc.num_mixtures = 2;
    bc.seed = 0xFACE;
    auto bank = train_bank(train, bc);
    std::vector<std::pair<ScoreVector, GestureLabel>> train_scores;
    for (const auto& g : train) train_scores.emplace_back(score(bank, g), g.label);
    auto model = fit_sequence_model(train_labels, train_scores, 1, 0xD1CE);

    std::vector<GestureLabel> truth, pred_s, pred_1;
    for (std::size_t s = half; s < corpus.sessions.size(); ++s) {
      std::vector<ScoreVector> scores;
      for (const auto& g : corpus.sessions[s]) {
        truth.push_back(g.label);
        scores.push_back(score(bank, g));
        pred_s.push_back(argmax_label(scores.back()));
      }
      auto decoded = decode_session(model, scores);
      pred_1.insert(pred_1.end(), decoded.begin(), decoded.end());
    }
    double acc_s = measure_accuracy(truth, pred_s).overall;
    double acc_1 = measure_accuracy(truth, pred_1).overall;
    c.check(acc_1 >= acc_s + 0.02,
            "HMM-S " + std::to_string(acc_s) + " vs HMM-1 " + std::to_string(acc_1));
  }
  c.check(c.elapsed() < 300.0, "runtime budget exceeded");
  c.finish();
}

void criterion8_determinism() {
  Criterion c(8, "repeating an experiment yields byte-identical result CSVs");
  ExperimentConfig cfg;
  cfg.synth_preset = "separable";
  cfg.synth_sessions = 15;
  cfg.gestures_per_session = 25;
  cfg.n_min = cfg.n_max = 3;
  cfg.m_min = cfg.m_max = 1;
  cfg.train_size = 25;
  cfg.test_size = 25;
  cfg.repetitions = 2;
  cfg.fixed_states = 3;
  cfg.fixed_mixtures = 1;
  cfg.base_seed = 11;
  cfg.max_iter = 10;

  auto dir = std::filesystem::temp_directory_path() / "gesturehmm_acceptance_det";
  std::filesystem::remove_all(dir);
  for (const char* run : {"a", "b"}) {
    auto corpus = cfg.load_corpus();
    write_results((dir / run).string(), "complexity", sweep_complexity(cfg, corpus));
    write_results((dir / run).string(), "crossval", crossval(cfg, corpus));
  }
  for (const char* name : {"complexity_raw.csv", "complexity_agg.csv", "crossval_raw.csv",
                           "crossval_agg.csv"}) {
    std::string a = slurp(dir / "a" / name), b = slurp(dir / "b" / name);
    c.check(!a.empty() && a == b, std::string(name) + " differs");
  }
  std::filesystem::remove_all(dir);
  c.finish();
}

}  // namespace

int main() {
  criterion1_forward_oracle();
  criterion2_viterbi_oracle();
  criterion3_decode_oracle();
  criterion4_em_monotonicity();
  criterion5_laplace();
  criterion6_param_count();
  criterion7_end_to_end();
  criterion8_determinism();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
