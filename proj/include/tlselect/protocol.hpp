#pragma once

// Two-stage model selection: stage 1 picks a base architecture, stage 2 picks an
// optimizer/loss pair for that architecture. Training happens elsewhere; each
// stage consumes the RunRecords it produced.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlselect/error.hpp"
#include "tlselect/metrics.hpp"
#include "tlselect/ranking.hpp"

namespace tlselect {

enum class StageId { stage1, stage2 };

inline std::string_view to_string(StageId id) { return id == StageId::stage1 ? "stage1" : "stage2"; }

inline StageId parse_stage_id(std::string_view s) {
  if (s == "stage1") return StageId::stage1;
  if (s == "stage2") return StageId::stage2;
  throw ParseError("unknown stage '" + std::string(s) + "' (expected stage1 or stage2)");
}

/// Training settings the fixture metrics were produced under. Descriptive only.
struct TrainingDefaults {
  std::size_t input_width = 128;
  std::size_t input_height = 128;
  std::size_t input_channels = 3;
  std::size_t batch_size = 32;
  std::size_t epochs = 15;
  double dropout = 0.5;
  std::string head = "flatten, dropout, dense-2 softmax";
  bool batch_norm_unfrozen = true;
  std::string base_architecture;
  std::string optimizer = "rmsprop";
  std::string loss = "categorical cross-entropy";

  friend bool operator==(const TrainingDefaults&, const TrainingDefaults&) = default;
};

struct StageConfig {
  StageId stage = StageId::stage1;
  std::vector<std::string> candidates;
  TrainingDefaults defaults;

  friend bool operator==(const StageConfig&, const StageConfig&) = default;
};

/// The seventeen ImageNet base architectures compared in stage 1.
inline StageConfig stage1_config() {
  StageConfig c;
  c.stage = StageId::stage1;
  c.candidates = {"Xception",    "Resnet50",          "Resnet50V2", "Resnet101",   "Resnet101V2", "Resnet152",
                  "Resnet152V2", "VGG16",             "VGG19",      "InceptionV3", "InceptionResNetV2",
                  "MobileNet",   "DenseNet121",       "DenseNet169", "DenseNet201", "NASNetLarge",
                  "NASNetMobile"};
  return c;
}

/// Three optimizers crossed with three losses, on the stage-1 winner.
inline StageConfig stage2_config(std::string base_architecture = "Xception") {
  StageConfig c;
  c.stage = StageId::stage2;
  for (const char* opt : {"RMS", "Adam", "Adagrad"}) {
    for (const char* loss : {"CCE", "MSE", "MAE"}) c.candidates.push_back(std::string(opt) + ", " + loss);
  }
  c.defaults.base_architecture = std::move(base_architecture);
  c.defaults.optimizer = "per candidate";
  c.defaults.loss = "per candidate";
  return c;
}

inline nlohmann::json to_json(const StageConfig& c) {
  const auto& d = c.defaults;
  return {{"stage", to_string(c.stage)},
          {"candidates", c.candidates},
          {"defaults",
           {{"input_dims", {d.input_width, d.input_height, d.input_channels}},
            {"batch_size", d.batch_size},
            {"epochs", d.epochs},
            {"dropout", d.dropout},
            {"head", d.head},
            {"batch_norm_unfrozen", d.batch_norm_unfrozen},
            {"base_architecture", d.base_architecture},
            {"optimizer", d.optimizer},
            {"loss", d.loss}}}};
}

inline StageConfig stage_config_from_json(const nlohmann::json& j) {
  try {
    StageConfig c;
    c.stage = parse_stage_id(j.at("stage").get<std::string>());
    c.candidates = j.at("candidates").get<std::vector<std::string>>();
    if (j.contains("defaults")) {
      const auto& d = j.at("defaults");
      auto& out = c.defaults;
      if (d.contains("input_dims")) {
        auto dims = d.at("input_dims").get<std::vector<std::size_t>>();
        if (dims.size() != 3) throw ParseError("stage config: input_dims must have 3 entries");
        out.input_width = dims[0];
        out.input_height = dims[1];
        out.input_channels = dims[2];
      }
      out.batch_size = d.value("batch_size", out.batch_size);
      out.epochs = d.value("epochs", out.epochs);
      out.dropout = d.value("dropout", out.dropout);
      out.head = d.value("head", out.head);
      out.batch_norm_unfrozen = d.value("batch_norm_unfrozen", out.batch_norm_unfrozen);
      out.base_architecture = d.value("base_architecture", out.base_architecture);
      out.optimizer = d.value("optimizer", out.optimizer);
      out.loss = d.value("loss", out.loss);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("stage config: ") + e.what());
  }
}

inline StageConfig load_stage_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return stage_config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

struct StageOutcome {
  StageConfig config;
  StageResult result;
};

/// Checks that the records cover exactly the configured candidates, then ranks them.
inline StageOutcome run_stage(const StageConfig& config, std::span<const RunRecord> records,
                              TiePolicy policy = TiePolicy::ordinal, const Weights& weights = {}) {
  const std::set<std::string> candidates(config.candidates.begin(), config.candidates.end());
  if (candidates.size() != config.candidates.size()) {
    throw ValidationError(std::string(to_string(config.stage)) + ": duplicate candidate in config");
  }
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!candidates.contains(r.model_name)) {
      throw ValidationError(std::string(to_string(config.stage)) + ": unknown model '" + r.model_name + "'");
    }
    seen.insert(r.model_name);
  }
  if (records.size() != config.candidates.size() || seen.size() != candidates.size()) {
    std::string missing;
    for (const auto& c : config.candidates) {
      if (!seen.contains(c)) missing += (missing.empty() ? "" : ", ") + c;
    }
    throw ValidationError(std::string(to_string(config.stage)) + ": expected " +
                          std::to_string(config.candidates.size()) + " records, got " +
                          std::to_string(records.size()) + (missing.empty() ? "" : " (missing: " + missing + ")"));
  }
  return {config, rank_stage(records, policy, weights)};
}

inline constexpr double kDefaultGeneralizationTolerance = 0.05;

struct VerificationReport {
  MetricTriple val;
  MetricTriple test;
  MetricTriple deltas;
  double tolerance = kDefaultGeneralizationTolerance;
  bool passed = false;
};

/// Passes iff every |val - test| is within `tolerance`.
inline VerificationReport verify_generalization(const MetricTriple& val, const MetricTriple& test,
                                                double tolerance = kDefaultGeneralizationTolerance) {
  detail::require(std::isfinite(tolerance) && tolerance > 0.0, "tolerance must be positive");
  VerificationReport r{val, test, abs_deltas(val, test), tolerance, false};
  r.passed = r.deltas.accuracy <= tolerance && r.deltas.sensitivity <= tolerance && r.deltas.specificity <= tolerance;
  return r;
}

/// "Xception" + "Adam, MSE" -> "Xception + Adam + MSE".
inline std::string describe_selection(std::string_view architecture, std::string_view configuration) {
  std::string out(architecture);
  for (const auto& part : text::split(configuration, ',')) out += " + " + std::string(text::trim(part));
  return out;
}

}  // namespace tlselect
