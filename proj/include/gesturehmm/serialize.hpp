#ifndef GESTUREHMM_SERIALIZE_HPP
#define GESTUREHMM_SERIALIZE_HPP

#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "gesturehmm/bank.hpp"
#include "gesturehmm/seqmodel.hpp"

namespace gesturehmm {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json mixture_to_json(const GaussianMixture& gmm) {
  Json j;
  j["dimension"] = gmm.dimension;
  j["components"] = Json::array();
  for (const auto& c : gmm.components) {
    Json cj;
    cj["weight"] = c.weight;
    cj["mean"] = c.gaussian.mean;
    cj["variance"] = c.gaussian.variance;
    j["components"].push_back(cj);
  }
  return j;
}

inline GaussianMixture mixture_from_json(const Json& j) {
  GaussianMixture gmm;
  gmm.dimension = j.at("dimension").get<std::size_t>();
  for (const auto& cj : j.at("components")) {
    MixtureComponent c;
    c.weight = cj.at("weight").get<double>();
    c.gaussian.mean = cj.at("mean").get<std::vector<double>>();
    c.gaussian.variance = cj.at("variance").get<std::vector<double>>();
    gmm.components.push_back(std::move(c));
  }
  return gmm;
}

inline Json hmm_to_json(const GestureHmm& hmm) {
  Json j;
  j["num_states"] = hmm.num_states();
  j["pi"] = hmm.pi;
  j["transitions"] = hmm.a;
  j["emissions"] = Json::array();
  for (const auto& g : hmm.emissions) j["emissions"].push_back(mixture_to_json(g));
  return j;
}

inline GestureHmm hmm_from_json(const Json& j) {
  GestureHmm hmm;
  hmm.topology.num_states = j.at("num_states").get<std::size_t>();
  hmm.pi = j.at("pi").get<std::vector<double>>();
  hmm.a = j.at("transitions").get<std::vector<std::vector<double>>>();
  for (const auto& gj : j.at("emissions")) hmm.emissions.push_back(mixture_from_json(gj));
  hmm.validate();
  return hmm;
}

}  // namespace detail

inline Json bank_to_json(const HmmBank& bank) {
  Json j;
  j["format"] = "gesturehmm-bank";
  j["version"] = 1;
  Json cfg;
  cfg["w1"] = bank.config.w1;
  cfg["w2"] = bank.config.w2;
  cfg["num_states"] = bank.config.num_states;
  cfg["num_mixtures"] = bank.config.num_mixtures;
  cfg["seed"] = bank.config.seed;
  cfg["tol"] = bank.config.tol;
  cfg["max_iter"] = bank.config.max_iter;
  cfg["normalize_scores"] = bank.config.normalize_scores;
  j["config"] = cfg;
  Json z;
  z["mean"] = bank.zscore.mean;
  z["std"] = bank.zscore.std;
  j["zscore"] = z;
  j["models"] = Json::object();
  for (GestureLabel g : all_labels()) {
    const auto gi = static_cast<std::size_t>(g);
    Json mj = detail::hmm_to_json(bank.models[gi]);
    mj["training"] = {{"iterations", bank.fit_reports[gi].iterations},
                      {"final_log_likelihood", bank.fit_reports[gi].final_log_likelihood}};
    j["models"][label_name(g)] = mj;
  }
  return j;
}

inline HmmBank bank_from_json(const Json& j) {
  if (j.at("format").get<std::string>() != "gesturehmm-bank")
    throw ValidationError("not a gesturehmm bank file");
  HmmBank bank;
  const auto& cfg = j.at("config");
  bank.config.w1 = cfg.at("w1").get<std::size_t>();
  bank.config.w2 = cfg.at("w2").get<std::size_t>();
  bank.config.num_states = cfg.at("num_states").get<std::size_t>();
  bank.config.num_mixtures = cfg.at("num_mixtures").get<std::size_t>();
  bank.config.seed = cfg.at("seed").get<std::uint64_t>();
  bank.config.tol = cfg.at("tol").get<double>();
  bank.config.max_iter = cfg.at("max_iter").get<int>();
  bank.config.normalize_scores = cfg.at("normalize_scores").get<bool>();
  auto mean = j.at("zscore").at("mean").get<std::vector<double>>();
  auto sd = j.at("zscore").at("std").get<std::vector<double>>();
  if (mean.size() != kFeatureDim || sd.size() != kFeatureDim)
    throw ValidationError("zscore stats must have 18 entries");
  std::copy(mean.begin(), mean.end(), bank.zscore.mean.begin());
  std::copy(sd.begin(), sd.end(), bank.zscore.std.begin());
  for (GestureLabel g : all_labels()) {
    const auto& mj = j.at("models").at(label_name(g));
    const auto gi = static_cast<std::size_t>(g);
    bank.models[gi] = detail::hmm_from_json(mj);
    bank.fit_reports[gi].iterations = mj.at("training").at("iterations").get<int>();
    bank.fit_reports[gi].final_log_likelihood =
        mj.at("training").at("final_log_likelihood").get<double>();
  }
  return bank;
}

inline Json sequence_model_to_json(const SequenceModel& model) {
  Json j;
  j["order"] = model.order;
  j["priors"] = model.priors;
  j["transitions"] = Json::array();
  for (const auto& row : model.transitions)
    j["transitions"].push_back(std::vector<double>(row.begin(), row.end()));
  j["emissions"] = Json::object();
  for (GestureLabel g : all_labels())
    j["emissions"][label_name(g)] =
        detail::mixture_to_json(model.emissions[static_cast<std::size_t>(g)]);
  return j;
}

inline SequenceModel sequence_model_from_json(const Json& j) {
  SequenceModel model;
  model.order = j.at("order").get<std::size_t>();
  model.priors = j.at("priors").get<std::vector<double>>();
  for (const auto& rj : j.at("transitions")) {
    auto row = rj.get<std::vector<double>>();
    if (row.size() != kNumLabels) throw ValidationError("bad transition row size");
    std::array<double, kNumLabels> arr;
    std::copy(row.begin(), row.end(), arr.begin());
    model.transitions.push_back(arr);
  }
  if (model.priors.size() != pow5(model.order) || model.transitions.size() != pow5(model.order))
    throw ValidationError("sequence model size mismatch");
  for (GestureLabel g : all_labels())
    model.emissions[static_cast<std::size_t>(g)] =
        detail::mixture_from_json(j.at("emissions").at(label_name(g)));
  return model;
}

// Model file: one JSON document holding the bank and, optionally, the
// sequence model trained on top of it.
inline void save_model_file(const std::string& path, const HmmBank& bank,
                            const SequenceModel* seq = nullptr) {
  Json j = bank_to_json(bank);
  if (seq) j["sequence_model"] = sequence_model_to_json(*seq);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

inline std::pair<HmmBank, std::optional<SequenceModel>> load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  Json j = Json::parse(in);
  std::optional<SequenceModel> seq;
  if (j.contains("sequence_model")) seq = sequence_model_from_json(j.at("sequence_model"));
  return {bank_from_json(j), std::move(seq)};
}

}  // namespace gesturehmm

#endif
