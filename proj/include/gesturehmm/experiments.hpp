#ifndef GESTUREHMM_EXPERIMENTS_HPP
#define GESTUREHMM_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <functional>
#include <map>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gesturehmm/bank.hpp"
#include "gesturehmm/core.hpp"
#include "gesturehmm/features.hpp"
#include "gesturehmm/io.hpp"
#include "gesturehmm/seqmodel.hpp"
#include "gesturehmm/smoothing.hpp"
#include "gesturehmm/synth.hpp"
#include "gesturehmm/toml.hpp"

namespace gesturehmm {

// A featurized corpus: per session, the ordered labeled feature sequences.
struct Corpus {
  std::vector<std::vector<FeatureSequence>> sessions;

  std::size_t total_gestures() const {
    std::size_t n = 0;
    for (const auto& s : sessions) n += s.size();
    return n;
  }

  std::vector<FeatureSequence> flat() const {
    std::vector<FeatureSequence> out;
    for (const auto& s : sessions) out.insert(out.end(), s.begin(), s.end());
    return out;
  }
};

inline Corpus featurize(const std::vector<SynthSession>& raw, std::size_t w1 = kDefaultWindow,
                        std::size_t w2 = kDefaultStep) {
  Corpus corpus;
  for (const auto& session : raw) {
    SensorSeries smoothed = gaussian_smooth(session.series);
    std::vector<FeatureSequence> seqs;
    for (const auto& seg : session.segments)
      seqs.push_back(extract_features(smoothed, seg, w1, w2));
    corpus.sessions.push_back(std::move(seqs));
  }
  return corpus;
}

// Reads every "<name>.data.csv" / "<name>.labels.csv" pair in a directory.
inline Corpus load_corpus_dir(const std::string& dir, double sample_rate_hz = 15.0,
                              std::size_t w1 = kDefaultWindow, std::size_t w2 = kDefaultStep) {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string fname = entry.path().filename().string();
    const std::string suffix = ".data.csv";
    if (fname.size() > suffix.size() && fname.ends_with(suffix))
      names.push_back(fname.substr(0, fname.size() - suffix.size()));
  }
  if (names.empty()) throw ValidationError("no *.data.csv files found in " + dir);
  std::sort(names.begin(), names.end());

  Corpus corpus;
  for (const auto& name : names) {
    auto [series, segments] = load_session((fs::path(dir) / (name + ".data.csv")).string(),
                                           (fs::path(dir) / (name + ".labels.csv")).string(),
                                           sample_rate_hz);
    SensorSeries smoothed = gaussian_smooth(series);
    std::vector<FeatureSequence> seqs;
    for (const auto& seg : segments) seqs.push_back(extract_features(smoothed, seg, w1, w2));
    corpus.sessions.push_back(std::move(seqs));
  }
  return corpus;
}

struct ExperimentConfig {
  std::string data_dir;                       // empty -> synthetic corpus
  std::string synth_preset = "separable";     // "separable" or "chain"
  std::size_t synth_sessions = 80;
  double synth_separability = -1.0;           // preset default when < 0
  double synth_noise = -1.0;
  std::size_t gestures_per_session = 0;       // preset default when 0

  std::size_t n_min = 3, n_max = 25;
  std::size_t m_min = 1, m_max = 7;
  std::vector<std::size_t> train_sizes;
  std::size_t train_size = 650;               // per-class, complexity sweep
  std::size_t test_size = 650;                // per-class held-out
  std::size_t repetitions = 5;
  std::vector<std::size_t> orders = {0, 1};
  std::size_t folds = 5;
  std::size_t fixed_states = 13, fixed_mixtures = 5;

  std::uint64_t base_seed = 0;
  std::string output_dir = "results";
  std::size_t workers = 1;
  std::size_t w1 = kDefaultWindow, w2 = kDefaultStep;
  double tol = 1e-5;
  int max_iter = 50;
  double sample_rate_hz = 15.0;

  void validate() const {
    if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
    if (folds < 2) throw ValidationError("fold count must be >= 2");
    for (std::size_t s : train_sizes)
      if (s == 0) throw ValidationError("training sizes must be positive");
    for (std::size_t n : orders)
      if (n > kMaxOrder) throw ValidationError("order exceeds " + std::to_string(kMaxOrder));
  }

  static ExperimentConfig from_toml(const TomlTable& t) {
    ExperimentConfig c;
    c.data_dir = t.get_string("data.dir", c.data_dir);
    c.sample_rate_hz = t.get_number("data.sample_rate_hz", c.sample_rate_hz);
    c.synth_preset = t.get_string("synth.preset", c.synth_preset);
    c.synth_sessions = static_cast<std::size_t>(t.get_number("synth.sessions", static_cast<double>(c.synth_sessions)));
    c.synth_separability = t.get_number("synth.separability", c.synth_separability);
    c.synth_noise = t.get_number("synth.noise_std", c.synth_noise);
    c.gestures_per_session = static_cast<std::size_t>(t.get_number("synth.gestures_per_session", 0));
    c.n_min = static_cast<std::size_t>(t.get_number("grid.n_min", static_cast<double>(c.n_min)));
    c.n_max = static_cast<std::size_t>(t.get_number("grid.n_max", static_cast<double>(c.n_max)));
    c.m_min = static_cast<std::size_t>(t.get_number("grid.m_min", static_cast<double>(c.m_min)));
    c.m_max = static_cast<std::size_t>(t.get_number("grid.m_max", static_cast<double>(c.m_max)));
    std::vector<double> sizes = t.get_number_array("sweep.train_sizes", {});
    for (double s : sizes) c.train_sizes.push_back(static_cast<std::size_t>(s));
    c.train_size = static_cast<std::size_t>(t.get_number("sweep.train_size", static_cast<double>(c.train_size)));
    c.test_size = static_cast<std::size_t>(t.get_number("sweep.test_size", static_cast<double>(c.test_size)));
    c.repetitions = static_cast<std::size_t>(t.get_number("sweep.repetitions", static_cast<double>(c.repetitions)));
    std::vector<double> orders = t.get_number_array("sweep.orders", {});
    if (!orders.empty()) {
      c.orders.clear();
      for (double o : orders) c.orders.push_back(static_cast<std::size_t>(o));
    }
    c.folds = static_cast<std::size_t>(t.get_number("sweep.folds", static_cast<double>(c.folds)));
    c.fixed_states = static_cast<std::size_t>(t.get_number("model.states", static_cast<double>(c.fixed_states)));
    c.fixed_mixtures = static_cast<std::size_t>(t.get_number("model.mixtures", static_cast<double>(c.fixed_mixtures)));
    c.w1 = static_cast<std::size_t>(t.get_number("model.w1", static_cast<double>(c.w1)));
    c.w2 = static_cast<std::size_t>(t.get_number("model.w2", static_cast<double>(c.w2)));
    c.tol = t.get_number("model.tol", c.tol);
    c.max_iter = static_cast<int>(t.get_number("model.max_iter", c.max_iter));
    c.base_seed = static_cast<std::uint64_t>(t.get_number("run.seed", 0));
    c.output_dir = t.get_string("run.output_dir", c.output_dir);
    c.workers = static_cast<std::size_t>(t.get_number("run.workers", 1));
    c.validate();
    return c;
  }

  SynthConfig make_synth_config() const {
    SynthConfig sc = synth_preset == "chain" ? SynthConfig::chain_structured(mix_seed(base_seed, 0xDA7A))
                                             : SynthConfig::separable(mix_seed(base_seed, 0xDA7A));
    if (synth_separability >= 0) sc.separability = synth_separability;
    if (synth_noise >= 0) sc.noise_std = synth_noise;
    if (gestures_per_session > 0) sc.gestures_per_session = gestures_per_session;
    sc.sample_rate_hz = sample_rate_hz;
    return sc;
  }

  Corpus load_corpus() const {
    if (!data_dir.empty()) return load_corpus_dir(data_dir, sample_rate_hz, w1, w2);
    return featurize(generate_corpus(make_synth_config(), synth_sessions), w1, w2);
  }
};

struct ResultRow {
  std::string experiment;
  std::size_t states = 0, mixtures = 0, train_size = 0, order = 0, fold = 0, repetition = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  std::array<double, kNumLabels> per_label{};
  double wall_time_s = 0.0;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline const char* kRawHeader =
    "experiment,states,mixtures,train_size,order,fold,repetition,seed,"
    "accuracy,acc_rest,acc_utensiling,acc_bite,acc_drink,acc_other";

inline std::string row_csv(const ResultRow& r) {
  std::string s = r.experiment;
  s += ',' + std::to_string(r.states) + ',' + std::to_string(r.mixtures) + ',' +
       std::to_string(r.train_size) + ',' + std::to_string(r.order) + ',' +
       std::to_string(r.fold) + ',' + std::to_string(r.repetition) + ',' +
       std::to_string(r.seed) + ',' + fmt_double(r.accuracy);
  for (double a : r.per_label) s += ',' + fmt_double(a);
  return s;
}

}  // namespace detail

struct Accuracy {
  double overall = 0.0;
  std::array<double, kNumLabels> per_label{};
  std::size_t total = 0;
};

inline Accuracy measure_accuracy(const std::vector<GestureLabel>& truth,
                                 const std::vector<GestureLabel>& predicted) {
  if (truth.size() != predicted.size()) throw ValidationError("accuracy: size mismatch");
  Accuracy acc;
  std::array<std::size_t, kNumLabels> correct{}, count{};
  std::size_t total_correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    ++count[t];
    if (truth[i] == predicted[i]) {
      ++correct[t];
      ++total_correct;
    }
  }
  acc.total = truth.size();
  acc.overall = truth.empty() ? 0.0 : static_cast<double>(total_correct) / static_cast<double>(truth.size());
  for (std::size_t g = 0; g < kNumLabels; ++g)
    acc.per_label[g] = count[g] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                     : static_cast<double>(correct[g]) / static_cast<double>(count[g]);
  return acc;
}

namespace detail {

// Seeded disjoint per-class train/test split over the flattened corpus.
struct ClassSplit {
  std::vector<FeatureSequence> train;
  std::vector<FeatureSequence> test;
};

inline ClassSplit sample_split(const std::vector<FeatureSequence>& pool, std::size_t train_per_class,
                               std::size_t test_per_class, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kNumLabels> by_label;
  for (std::size_t i = 0; i < pool.size(); ++i)
    by_label[static_cast<std::size_t>(pool[i].label)].push_back(i);

  std::string shortage;
  for (GestureLabel g : all_labels()) {
    const auto& idx = by_label[static_cast<std::size_t>(g)];
    if (idx.size() < train_per_class + test_per_class)
      shortage += std::string(shortage.empty() ? "" : ", ") + label_name(g) + "=" +
                  std::to_string(idx.size());
  }
  if (!shortage.empty())
    throw ValidationError("insufficient gestures for disjoint sampling of " +
                          std::to_string(train_per_class) + "+" + std::to_string(test_per_class) +
                          " per class; counts: " + shortage);

  ClassSplit split;
  std::mt19937_64 rng(seed);
  for (GestureLabel g : all_labels()) {
    auto idx = by_label[static_cast<std::size_t>(g)];
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < train_per_class; ++i) split.train.push_back(pool[idx[i]]);
    for (std::size_t i = 0; i < test_per_class; ++i)
      split.test.push_back(pool[idx[train_per_class + i]]);
  }
  return split;
}

inline Accuracy evaluate_bank(const HmmBank& bank, const std::vector<FeatureSequence>& test) {
  std::vector<GestureLabel> truth, predicted;
  for (const auto& g : test) {
    truth.push_back(g.label);
    predicted.push_back(classify(bank, g));
  }
  return measure_accuracy(truth, predicted);
}

// Runs jobs on a bounded pool; results land in preassigned slots so output
// order is independent of scheduling.
inline void run_jobs(std::size_t count, std::size_t workers,
                     const std::function<void(std::size_t)>& job) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          job(i);
        } catch (...) {
          std::scoped_lock lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline void write_rows(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << kRawHeader << '\n';
  for (const auto& r : rows) out << row_csv(r) << '\n';
}

inline void write_timings(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  out << "experiment,states,mixtures,train_size,order,fold,repetition,wall_time_s\n";
  for (const auto& r : rows)
    out << r.experiment << ',' << r.states << ',' << r.mixtures << ',' << r.train_size << ','
        << r.order << ',' << r.fold << ',' << r.repetition << ',' << fmt_double(r.wall_time_s)
        << '\n';
}

struct AggKey {
  std::size_t states, mixtures, train_size, order;
  auto operator<=>(const AggKey&) const = default;
};

inline void write_aggregate(const std::string& path, const std::vector<ResultRow>& rows) {
  std::map<AggKey, std::vector<double>> cells;
  for (const auto& r : rows)
    cells[{r.states, r.mixtures, r.train_size, r.order}].push_back(r.accuracy);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "states,mixtures,train_size,order,runs,mean_accuracy,std_accuracy\n";
  for (const auto& [key, accs] : cells) {
    double mean = std::accumulate(accs.begin(), accs.end(), 0.0) / static_cast<double>(accs.size());
    double var = 0.0;
    for (double a : accs) var += (a - mean) * (a - mean);
    double sd = accs.size() > 1 ? std::sqrt(var / static_cast<double>(accs.size() - 1)) : 0.0;
    out << key.states << ',' << key.mixtures << ',' << key.train_size << ',' << key.order << ','
        << accs.size() << ',' << fmt_double(mean) << ',' << fmt_double(sd) << '\n';
  }
}

}  // namespace detail

inline void fill_row(ResultRow& row, const Accuracy& acc) {
  row.accuracy = acc.overall;
  row.per_label = acc.per_label;
}

// Complexity grid: disjoint train/test resample per cell and repetition.
inline std::vector<ResultRow> sweep_complexity(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  const auto pool = corpus.flat();
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n)
    for (std::size_t m = cfg.m_min; m <= cfg.m_max; ++m) cells.emplace_back(n, m);

  std::vector<ResultRow> rows(cells.size() * cfg.repetitions);
  detail::run_jobs(rows.size(), cfg.workers, [&](std::size_t i) {
    const auto [n, m] = cells[i / cfg.repetitions];
    const std::size_t rep = i % cfg.repetitions;
    const std::uint64_t seed = mix_seed(cfg.base_seed, (n * 100 + m) * 1000 + rep);
    const auto start = std::chrono::steady_clock::now();

    auto split = detail::sample_split(pool, cfg.train_size, cfg.test_size, seed);
    BankConfig bc{cfg.w1, cfg.w2, n, m, seed, cfg.tol, cfg.max_iter, false};
    HmmBank bank = train_bank(split.train, bc);
    Accuracy acc = detail::evaluate_bank(bank, split.test);

    ResultRow& row = rows[i];
    row.experiment = "complexity";
    row.states = n;
    row.mixtures = m;
    row.train_size = cfg.train_size;
    row.repetition = rep;
    row.seed = seed;
    fill_row(row, acc);
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

// Training-size curve at fixed complexity against one fixed held-out test set.
inline std::vector<ResultRow> sweep_training_size(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  if (cfg.train_sizes.empty()) throw ValidationError("sweep-size: train_sizes is empty");
  const auto pool = corpus.flat();
  const std::size_t max_size = *std::max_element(cfg.train_sizes.begin(), cfg.train_sizes.end());

  // One split reserves the test set and the largest training pool; each
  // cell subsamples its training gestures from that pool.
  auto base_split = detail::sample_split(pool, max_size, cfg.test_size,
                                         mix_seed(cfg.base_seed, 0x5123));
  std::array<std::vector<std::size_t>, kNumLabels> train_by_label;
  for (std::size_t i = 0; i < base_split.train.size(); ++i)
    train_by_label[static_cast<std::size_t>(base_split.train[i].label)].push_back(i);

  std::vector<ResultRow> rows(cfg.train_sizes.size() * cfg.repetitions);
  detail::run_jobs(rows.size(), cfg.workers, [&](std::size_t i) {
    const std::size_t size = cfg.train_sizes[i / cfg.repetitions];
    const std::size_t rep = i % cfg.repetitions;
    const std::uint64_t seed = mix_seed(cfg.base_seed, size * 1000 + rep);
    const auto start = std::chrono::steady_clock::now();

    std::mt19937_64 rng(seed);
    std::vector<FeatureSequence> train;
    for (GestureLabel g : all_labels()) {
      auto idx = train_by_label[static_cast<std::size_t>(g)];
      if (idx.size() < size)
        throw ValidationError(std::string("sweep-size: training pool for '") + label_name(g) +
                              "' has only " + std::to_string(idx.size()) + " gestures");
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t k = 0; k < size; ++k) train.push_back(base_split.train[idx[k]]);
    }
    BankConfig bc{cfg.w1, cfg.w2, cfg.fixed_states, cfg.fixed_mixtures, seed, cfg.tol,
                  cfg.max_iter, false};
    HmmBank bank = train_bank(train, bc);
    Accuracy acc = detail::evaluate_bank(bank, base_split.test);

    ResultRow& row = rows[i];
    row.experiment = "size";
    row.states = cfg.fixed_states;
    row.mixtures = cfg.fixed_mixtures;
    row.train_size = size;
    row.repetition = rep;
    row.seed = seed;
    fill_row(row, acc);
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

namespace detail {

inline std::vector<std::vector<std::size_t>> session_folds(std::size_t sessions, std::size_t folds,
                                                           std::uint64_t seed) {
  if (sessions < folds)
    throw ValidationError("fewer sessions (" + std::to_string(sessions) + ") than folds (" +
                          std::to_string(folds) + ")");
  std::vector<std::size_t> order(sessions);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t i = 0; i < sessions; ++i) out[i % folds].push_back(order[i]);
  return out;
}

struct FoldModels {
  HmmBank bank;
  std::vector<std::vector<GestureLabel>> train_label_sequences;
  std::vector<std::pair<ScoreVector, GestureLabel>> train_scores;
};

inline FoldModels train_fold(const Corpus& corpus, const std::vector<bool>& in_test,
                             const ExperimentConfig& cfg, std::uint64_t seed) {
  FoldModels fm;
  std::vector<FeatureSequence> train;
  for (std::size_t s = 0; s < corpus.sessions.size(); ++s) {
    if (in_test[s]) continue;
    std::vector<GestureLabel> labels;
    for (const auto& g : corpus.sessions[s]) {
      train.push_back(g);
      labels.push_back(g.label);
    }
    fm.train_label_sequences.push_back(std::move(labels));
  }
  BankConfig bc{cfg.w1, cfg.w2, cfg.fixed_states, cfg.fixed_mixtures, seed, cfg.tol,
                cfg.max_iter, false};
  fm.bank = train_bank(train, bc);
  for (const auto& g : train) fm.train_scores.emplace_back(score(fm.bank, g), g.label);
  return fm;
}

}  // namespace detail

// HMM-N order comparison under session-level cross-validation. Order 0 is
// the bank alone.
inline std::vector<ResultRow> compare_orders(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  auto folds = detail::session_folds(corpus.sessions.size(), cfg.folds,
                                     mix_seed(cfg.base_seed, 0xF01D));
  std::vector<ResultRow> rows;
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<bool> in_test(corpus.sessions.size(), false);
    for (std::size_t s : folds[f]) in_test[s] = true;
    const std::uint64_t fold_seed = mix_seed(cfg.base_seed, 0xBA5E + f);
    auto fm = detail::train_fold(corpus, in_test, cfg, fold_seed);

    // Scores for every test gesture, per session.
    std::vector<std::vector<ScoreVector>> test_scores;
    std::vector<std::vector<GestureLabel>> test_truth;
    for (std::size_t s : folds[f]) {
      std::vector<ScoreVector> scores;
      std::vector<GestureLabel> truth;
      for (const auto& g : corpus.sessions[s]) {
        scores.push_back(score(fm.bank, g));
        truth.push_back(g.label);
      }
      test_scores.push_back(std::move(scores));
      test_truth.push_back(std::move(truth));
    }
    std::vector<GestureLabel> truth_flat;
    for (const auto& t : test_truth) truth_flat.insert(truth_flat.end(), t.begin(), t.end());

    for (std::size_t order : cfg.orders) {
      std::vector<GestureLabel> predicted;
      if (order == 0) {
        for (const auto& scores : test_scores)
          for (const auto& sv : scores) predicted.push_back(argmax_label(sv));
      } else {
        SequenceModel model = fit_sequence_model(fm.train_label_sequences, fm.train_scores, order,
                                                 mix_seed(fold_seed, order));
        for (const auto& scores : test_scores) {
          auto decoded = decode_session(model, scores);
          predicted.insert(predicted.end(), decoded.begin(), decoded.end());
        }
      }
      ResultRow row;
      row.experiment = "orders";
      row.states = cfg.fixed_states;
      row.mixtures = cfg.fixed_mixtures;
      row.order = order;
      row.fold = f;
      row.seed = fold_seed;
      fill_row(row, measure_accuracy(truth_flat, predicted));
      row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(row);
    }
  }
  return rows;
}

// Plain session-level k-fold cross-validation of the bank.
inline std::vector<ResultRow> crossval(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  auto folds = detail::session_folds(corpus.sessions.size(), cfg.folds,
                                     mix_seed(cfg.base_seed, 0xF01D));
  std::vector<ResultRow> rows(cfg.folds);
  detail::run_jobs(cfg.folds, cfg.workers, [&](std::size_t f) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<bool> in_test(corpus.sessions.size(), false);
    for (std::size_t s : folds[f]) in_test[s] = true;
    const std::uint64_t fold_seed = mix_seed(cfg.base_seed, 0xBA5E + f);
    auto fm = detail::train_fold(corpus, in_test, cfg, fold_seed);

    std::vector<GestureLabel> truth, predicted;
    for (std::size_t s : folds[f])
      for (const auto& g : corpus.sessions[s]) {
        truth.push_back(g.label);
        predicted.push_back(classify(fm.bank, g));
      }
    ResultRow& row = rows[f];
    row.experiment = "crossval";
    row.states = cfg.fixed_states;
    row.mixtures = cfg.fixed_mixtures;
    row.fold = f;
    row.seed = fold_seed;
    fill_row(row, measure_accuracy(truth, predicted));
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

// Writes <name>_raw.csv, <name>_agg.csv and <name>_timings.csv. Timings are
// not part of the deterministic result contract and live in their own file.
inline void write_results(const std::string& output_dir, const std::string& name,
                          const std::vector<ResultRow>& rows) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);
  detail::write_rows((fs::path(output_dir) / (name + "_raw.csv")).string(), rows);
  detail::write_aggregate((fs::path(output_dir) / (name + "_agg.csv")).string(), rows);
  detail::write_timings((fs::path(output_dir) / (name + "_timings.csv")).string(), rows);
}

}  // namespace gesturehmm

#endif
