#pragma once

// JSON documents: stage results, dataset manifests and dataset source configs.
// Doubles are written at full precision so parse(render(x)) reproduces x.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlselect/dataset_plan.hpp"
#include "tlselect/error.hpp"
#include "tlselect/protocol.hpp"
#include "tlselect/ranking.hpp"

namespace tlselect::json {

using nlohmann::json;

inline json to_json(const MetricSet& m) {
  return {{"overfitting", m.overfitting},
          {"val_accuracy", m.val_accuracy},
          {"val_loss", m.val_loss},
          {"sensitivity", m.sensitivity},
          {"specificity", m.specificity}};
}

inline json to_json(const Weights& w) {
  return {{"overfit", w.overfit},
          {"accuracy", w.accuracy},
          {"loss", w.loss},
          {"sensitivity", w.sensitivity},
          {"specificity", w.specificity}};
}

inline json to_json(const StageResult& r) {
  json standings = json::array();
  for (const auto& s : r.standings) {
    standings.push_back({
        {"model", s.record.model_name},
        {"input_index", s.input_index},
        {"final_rank", s.final_rank},
        {"params", s.record.param_count ? json(*s.record.param_count) : json(nullptr)},
        {"metrics", to_json(s.record.metrics)},
        {"ranks",
         {{"overfit", s.ranks.overfit},
          {"accuracy", s.ranks.accuracy},
          {"loss", s.ranks.loss},
          {"sensitivity", s.ranks.sensitivity},
          {"specificity", s.ranks.specificity}}},
        {"score",
         {{"overfit_term", s.score.overfit_term},
          {"accuracy_term", s.score.accuracy_term},
          {"loss_term", s.score.loss_term},
          {"sensitivity_term", s.score.sensitivity_term},
          {"specificity_term", s.score.specificity_term},
          {"total", s.score.total}}},
    });
  }
  return {{"tie_policy", to_string(r.tie_policy)},
          {"weights", to_json(r.weights)},
          {"stage_size", r.size()},
          {"winner", r.winner()},
          {"standings", std::move(standings)}};
}

inline json to_json(const StageOutcome& o) {
  json j = to_json(o.result);
  j["stage"] = to_string(o.config.stage);
  j["config"] = tlselect::to_json(o.config);
  return j;
}

inline StageResult stage_result_from_json(const json& j) {
  try {
    StageResult r;
    r.tie_policy = parse_tie_policy(j.at("tie_policy").get<std::string>());
    const auto& w = j.at("weights");
    r.weights = {w.at("overfit").get<double>(), w.at("accuracy").get<double>(), w.at("loss").get<double>(),
                 w.at("sensitivity").get<double>(), w.at("specificity").get<double>()};
    const auto n = j.at("standings").size();
    for (const auto& s : j.at("standings")) {
      Standing st;
      st.record.model_name = s.at("model").get<std::string>();
      st.input_index = s.at("input_index").get<std::size_t>();
      st.final_rank = s.at("final_rank").get<std::size_t>();
      if (!s.at("params").is_null()) st.record.param_count = s.at("params").get<std::uint64_t>();
      const auto& m = s.at("metrics");
      st.record.metrics = {m.at("overfitting").get<double>(), m.at("val_accuracy").get<double>(),
                           m.at("val_loss").get<double>(), m.at("sensitivity").get<double>(),
                           m.at("specificity").get<double>()};
      const auto& rk = s.at("ranks");
      st.ranks = {rk.at("overfit").get<double>(), rk.at("accuracy").get<double>(), rk.at("loss").get<double>(),
                  rk.at("sensitivity").get<double>(), rk.at("specificity").get<double>()};
      const auto& sc = s.at("score");
      st.score.overfit_term = sc.at("overfit_term").get<double>();
      st.score.accuracy_term = sc.at("accuracy_term").get<double>();
      st.score.loss_term = sc.at("loss_term").get<double>();
      st.score.sensitivity_term = sc.at("sensitivity_term").get<double>();
      st.score.specificity_term = sc.at("specificity_term").get<double>();
      st.score.total = sc.at("total").get<double>();
      st.score.weights = r.weights;
      st.score.stage_size = n;
      if (st.input_index >= n) throw ParseError("stage result: input_index out of range");
      r.standings.push_back(std::move(st));
    }
    if (r.standings.empty()) throw ParseError("stage result: no standings");
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("stage result: ") + e.what());
  }
}

inline json to_json(const DatasetManifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"ref", e.ref}, {"label", to_string(e.label)}, {"source", e.source}, {"split", to_string(e.split)}});
  }
  return {{"seed", m.seed},
          {"generator", m.generator},
          {"spec", {{"train", m.spec.train}, {"val", m.spec.val}, {"test", m.spec.test}}},
          {"entries", std::move(entries)}};
}

inline DatasetManifest manifest_from_json(const json& j) {
  try {
    DatasetManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.generator = j.at("generator").get<std::string>();
    const auto& s = j.at("spec");
    m.spec = {s.at("train").get<double>(), s.at("val").get<double>(), s.at("test").get<double>()};
    for (const auto& e : j.at("entries")) {
      m.entries.push_back({e.at("ref").get<std::string>(), parse_label(e.at("label").get<std::string>()),
                           e.at("source").get<std::string>(), parse_split(e.at("split").get<std::string>())});
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
}

/// Dataset plan document:
///   {"sources": [{"name": ..., "label": "healthy"|"diseased", "count": N, "b": B, "c": C}, ...],
///    "fractions": [0.6, 0.2, 0.2], "seed": 42}
/// "fractions" and "seed" are optional.
struct DatasetConfig {
  std::vector<PlannedSource> sources;
  SplitSpec spec;
  std::optional<std::uint64_t> seed;
};

inline json to_json(const DatasetConfig& c) {
  json sources = json::array();
  for (const auto& s : c.sources) {
    sources.push_back({{"name", s.source.name},
                       {"label", to_string(s.source.label)},
                       {"count", s.source.image_count},
                       {"b", s.plan.b},
                       {"c", s.plan.c}});
  }
  json j = {{"sources", std::move(sources)}, {"fractions", {c.spec.train, c.spec.val, c.spec.test}}};
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

inline DatasetConfig dataset_config_from_json(const json& j) {
  try {
    DatasetConfig c;
    for (const auto& s : j.at("sources")) {
      c.sources.push_back({{s.at("name").get<std::string>(), parse_label(s.at("label").get<std::string>()),
                            s.at("count").get<std::uint64_t>()},
                           {s.value("b", std::uint64_t{1}), s.value("c", std::uint64_t{0})}});
    }
    if (j.contains("fractions")) {
      auto f = j.at("fractions").get<std::vector<double>>();
      if (f.size() != 3) throw ParseError("dataset config: fractions must have 3 entries");
      c.spec = {f[0], f[1], f[2]};
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.spec.validate();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset config: ") + e.what());
  }
}

inline json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace tlselect::json
