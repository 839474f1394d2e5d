// Command-line front end: data generation, ingestion, training, scoring and
// the experiment sweeps.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gesturehmm/gesturehmm.hpp"

namespace fs = std::filesystem;
using namespace gesturehmm;

namespace {

std::string fmt17(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

ExperimentConfig load_experiment_config(const std::string& config_path, std::uint64_t seed_override,
                                        const std::string& out_override, std::size_t workers) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{}
                                             : ExperimentConfig::from_toml(TomlTable::parse_file(config_path));
  if (seed_override != static_cast<std::uint64_t>(-1)) cfg.base_seed = seed_override;
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (workers > 0) cfg.workers = workers;
  cfg.validate();
  return cfg;
}

int run_synth(const std::string& config_path, const std::string& preset, std::size_t sessions,
              std::uint64_t seed, const std::string& out_dir) {
  SynthConfig cfg;
  if (!config_path.empty()) {
    auto t = TomlTable::parse_file(config_path);
    ExperimentConfig ec = ExperimentConfig::from_toml(t);
    ec.base_seed = seed;
    if (!preset.empty()) ec.synth_preset = preset;
    cfg = ec.make_synth_config();
  } else {
    cfg = preset == "chain" ? SynthConfig::chain_structured(seed) : SynthConfig::separable(seed);
  }
  auto corpus = generate_corpus(cfg, sessions);
  fs::create_directories(out_dir);
  for (const auto& session : corpus) {
    write_series(session.series, (fs::path(out_dir) / (session.series.session_id + ".data.csv")).string());
    write_segments(session.segments,
                   (fs::path(out_dir) / (session.series.session_id + ".labels.csv")).string());
  }
  std::cout << "wrote " << corpus.size() << " sessions to " << out_dir << "\n";
  return 0;
}

// Configuration-driven adapter from an external CSV layout to the canonical
// session/annotation formats. The config names the source columns and label
// spellings.
int run_ingest(const std::string& config_path, const std::string& data_in,
               const std::string& labels_in, const std::string& out_prefix) {
  TomlTable t = config_path.empty() ? TomlTable::parse("") : TomlTable::parse_file(config_path);
  std::vector<double> cols_d = t.get_number_array("ingest.columns", {0, 1, 2, 3, 4, 5});
  if (cols_d.size() != 6) throw ValidationError("ingest.columns must list 6 source columns");
  std::vector<std::size_t> cols(cols_d.begin(), cols_d.end());
  const bool skip_header = t.get_bool("ingest.skip_header", false);
  const std::size_t start_col = static_cast<std::size_t>(t.get_number("ingest.start_column", 0));
  const std::size_t end_col = static_cast<std::size_t>(t.get_number("ingest.end_column", 1));
  const std::size_t label_col = static_cast<std::size_t>(t.get_number("ingest.label_column", 2));

  std::ifstream in(data_in);
  if (!in) throw ValidationError("cannot open " + data_in);
  SensorSeries series;
  series.session_id = fs::path(out_prefix).stem().string();
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if ((first && skip_header) || detail::skippable(line)) {
      first = false;
      continue;
    }
    first = false;
    auto fields = detail::split_csv(line);
    SensorSample s;
    for (int a = 0; a < kNumAxes; ++a) {
      std::size_t col = cols[static_cast<std::size_t>(a)];
      if (col >= fields.size())
        throw ParseError(data_in + ":" + std::to_string(line_no) + ": missing column " +
                         std::to_string(col));
      s[a] = detail::parse_number(fields[col], data_in, line_no);
    }
    series.samples.push_back(s);
  }
  series.validate();

  std::vector<GestureSegment> segments;
  if (!labels_in.empty()) {
    std::ifstream lin(labels_in);
    if (!lin) throw ValidationError("cannot open " + labels_in);
    line_no = 0;
    first = true;
    while (std::getline(lin, line)) {
      ++line_no;
      if ((first && skip_header) || detail::skippable(line)) {
        first = false;
        continue;
      }
      first = false;
      auto fields = detail::split_csv(line);
      auto need = std::max({start_col, end_col, label_col});
      if (need >= fields.size())
        throw ParseError(labels_in + ":" + std::to_string(line_no) + ": missing column");
      GestureSegment seg;
      seg.start_index = static_cast<std::size_t>(detail::parse_number(fields[start_col], labels_in, line_no));
      seg.end_index = static_cast<std::size_t>(detail::parse_number(fields[end_col], labels_in, line_no));
      std::string token = fields[label_col];
      for (auto& ch : token) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      std::string mapped = t.get_string("labels." + token, token);
      seg.label = parse_label(mapped);
      segments.push_back(seg);
    }
    validate_segments(segments, series.size());
  }

  if (fs::path(out_prefix).has_parent_path())
    fs::create_directories(fs::path(out_prefix).parent_path());
  write_series(series, out_prefix + ".data.csv");
  if (!labels_in.empty()) write_segments(segments, out_prefix + ".labels.csv");
  std::cout << "ingested " << series.size() << " samples, " << segments.size() << " segments\n";
  return 0;
}

int run_train(const std::string& data_dir, const std::string& model_out, std::size_t states,
              std::size_t mixtures, std::uint64_t seed, std::size_t order, double rate) {
  Corpus corpus = load_corpus_dir(data_dir, rate);
  BankConfig bc;
  bc.num_states = states;
  bc.num_mixtures = mixtures;
  bc.seed = seed;
  auto bank = train_bank(corpus.flat(), bc);

  if (order > 0) {
    std::vector<std::vector<GestureLabel>> label_sequences;
    std::vector<std::pair<ScoreVector, GestureLabel>> scored;
    for (const auto& session : corpus.sessions) {
      std::vector<GestureLabel> labels;
      for (const auto& g : session) {
        labels.push_back(g.label);
        scored.emplace_back(score(bank, g), g.label);
      }
      label_sequences.push_back(std::move(labels));
    }
    auto model = fit_sequence_model(label_sequences, scored, order, mix_seed(seed, 0x5E0));
    save_model_file(model_out, bank, &model);
  } else {
    save_model_file(model_out, bank);
  }
  std::cout << "trained bank on " << corpus.total_gestures() << " gestures -> " << model_out << "\n";
  return 0;
}

int run_classify(const std::string& model_path, const std::string& series_path,
                 const std::string& segments_path, const std::string& out_path, double rate) {
  auto [bank, seq_model] = load_model_file(model_path);
  auto [series, segments] = load_session(series_path, segments_path, rate);
  auto smoothed = gaussian_smooth(series);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw ValidationError("cannot open " + out_path);
    out = &file;
  }
  *out << "segment,true_label,predicted,score_rest,score_utensiling,score_bite,score_drink,score_other\n";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto features = extract_features(smoothed, segments[i], bank.config.w1, bank.config.w2);
    auto scores = score(bank, features);
    *out << i << ',' << label_name(segments[i].label) << ',' << label_name(argmax_label(scores));
    for (double s : scores) *out << ',' << fmt17(s);
    *out << '\n';
  }
  return 0;
}

int run_decode(const std::string& model_path, const std::string& series_path,
               const std::string& segments_path, const std::string& out_path, double rate) {
  auto [bank, seq_model] = load_model_file(model_path);
  if (!seq_model)
    throw ValidationError("model file has no sequence model; train with --order >= 1");
  auto [series, segments] = load_session(series_path, segments_path, rate);
  auto smoothed = gaussian_smooth(series);

  std::vector<ScoreVector> scores;
  for (const auto& seg : segments)
    scores.push_back(score(bank, extract_features(smoothed, seg, bank.config.w1, bank.config.w2)));
  auto decoded = decode_session(*seq_model, scores);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw ValidationError("cannot open " + out_path);
    out = &file;
  }
  *out << "segment,true_label,predicted\n";
  for (std::size_t i = 0; i < segments.size(); ++i)
    *out << i << ',' << label_name(segments[i].label) << ',' << label_name(decoded[i]) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level HMM eating-gesture recognition toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, out_path, data_dir, model_path, series_path, segments_path;
  std::string preset = "separable", labels_path, out_prefix;
  std::size_t sessions = 40, states = 13, mixtures = 5, order = 0, workers = 0;
  std::uint64_t seed = 0;
  std::uint64_t seed_override = static_cast<std::uint64_t>(-1);
  double rate = 15.0;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--config", config_path, "Experiment config (TOML)");
  synth->add_option("--preset", preset, "Motif preset: separable or chain");
  synth->add_option("--sessions", sessions, "Number of sessions");
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--out", out_dir, "Output directory")->required();

  auto* ingest = app.add_subcommand("ingest", "Convert an external recording to canonical files");
  ingest->add_option("--config", config_path, "Adapter config (TOML)");
  ingest->add_option("--data", series_path, "Source data CSV")->required();
  ingest->add_option("--labels", labels_path, "Source annotation CSV");
  ingest->add_option("--out-prefix", out_prefix, "Output path prefix")->required();

  auto* train = app.add_subcommand("train", "Train an HMM bank (and optional context model)");
  train->add_option("--data", data_dir, "Corpus directory")->required();
  train->add_option("--out", out_path, "Model file")->required();
  train->add_option("--states", states, "States per gesture HMM");
  train->add_option("--mixtures", mixtures, "Gaussians per state");
  train->add_option("--order", order, "Context model order (0 = bank only)");
  train->add_option("--seed", seed, "Training seed");
  train->add_option("--rate", rate, "Sample rate in Hz");

  auto* classify_cmd = app.add_subcommand("classify", "Score and classify segmented gestures");
  classify_cmd->add_option("--model", model_path, "Model file")->required();
  classify_cmd->add_option("--series", series_path, "Session data file")->required();
  classify_cmd->add_option("--segments", segments_path, "Annotation file")->required();
  classify_cmd->add_option("--out", out_path, "Output CSV (default stdout)");
  classify_cmd->add_option("--rate", rate, "Sample rate in Hz");

  auto* decode = app.add_subcommand("decode", "Decode a session with the context model");
  decode->add_option("--model", model_path, "Model file with sequence model")->required();
  decode->add_option("--series", series_path, "Session data file")->required();
  decode->add_option("--segments", segments_path, "Annotation file")->required();
  decode->add_option("--out", out_path, "Output CSV (default stdout)");
  decode->add_option("--rate", rate, "Sample rate in Hz");

  auto add_sweep_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config (TOML)");
    cmd->add_option("--seed", seed_override, "Override base seed");
    cmd->add_option("--out", out_dir, "Override output directory");
    cmd->add_option("--workers", workers, "Worker thread count");
  };
  auto* sweep_c = app.add_subcommand("sweep-complexity", "State/mixture grid sweep");
  add_sweep_options(sweep_c);
  auto* sweep_s = app.add_subcommand("sweep-size", "Training-set size sweep");
  add_sweep_options(sweep_s);
  auto* orders_cmd = app.add_subcommand("compare-orders", "Context-order comparison");
  add_sweep_options(orders_cmd);
  auto* cv = app.add_subcommand("crossval", "Session-level cross-validation");
  add_sweep_options(cv);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return run_synth(config_path, preset, sessions, seed, out_dir);
    if (ingest->parsed()) return run_ingest(config_path, series_path, labels_path, out_prefix);
    if (train->parsed()) return run_train(data_dir, out_path, states, mixtures, seed, order, rate);
    if (classify_cmd->parsed())
      return run_classify(model_path, series_path, segments_path, out_path, rate);
    if (decode->parsed()) return run_decode(model_path, series_path, segments_path, out_path, rate);

    auto cfg = load_experiment_config(config_path, seed_override, out_dir, workers);
    auto corpus = cfg.load_corpus();
    if (sweep_c->parsed())
      write_results(cfg.output_dir, "complexity", sweep_complexity(cfg, corpus));
    else if (sweep_s->parsed())
      write_results(cfg.output_dir, "size", sweep_training_size(cfg, corpus));
    else if (orders_cmd->parsed())
      write_results(cfg.output_dir, "orders", compare_orders(cfg, corpus));
    else if (cv->parsed())
      write_results(cfg.output_dir, "crossval", crossval(cfg, corpus));
    std::cout << "results written to " << cfg.output_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
