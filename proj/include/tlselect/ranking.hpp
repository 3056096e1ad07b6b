#pragma once

// Non-parametric per-metric ranking and the weighted overall score used to
// order candidate models within a stage.
//
// For every metric the largest value gets rank 1 and the smallest rank N.
// Desirable metrics (accuracy, sensitivity, specificity) enter the score as
// (N + 1 - rank); undesirable ones (overfitting, loss) enter as the raw rank.
// Highest total wins; equal totals go to the model with fewer parameters.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tlselect/error.hpp"
#include "tlselect/metrics.hpp"
#include "tlselect/text.hpp"

namespace tlselect {

enum class TiePolicy { ordinal, average, competition };

inline std::string_view to_string(TiePolicy p) {
  switch (p) {
    case TiePolicy::ordinal: return "ordinal";
    case TiePolicy::average: return "average";
    case TiePolicy::competition: return "competition";
  }
  return "?";
}

inline TiePolicy parse_tie_policy(std::string_view s) {
  if (s == "ordinal") return TiePolicy::ordinal;
  if (s == "average") return TiePolicy::average;
  if (s == "competition") return TiePolicy::competition;
  throw ParseError("unknown tie policy '" + std::string(s) + "' (expected ordinal, average or competition)");
}

/// Ranks `values` so the largest gets 1 and the smallest gets N. Output is aligned with input.
///
/// ordinal: equal values take consecutive ranks in input order.
/// average: equal values share the mean of the ranks they span.
/// competition: equal values share the smallest rank they span.
inline std::vector<double> metric_ranks(std::span<const double> values, TiePolicy policy = TiePolicy::ordinal) {
  if (values.empty()) throw ValidationError("metric_ranks: no values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("metric_ranks: value at index " + std::to_string(i) + " is not finite");
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  std::vector<double> ranks(values.size());
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    for (std::size_t k = start; k < end; ++k) {
      switch (policy) {
        case TiePolicy::ordinal: ranks[order[k]] = static_cast<double>(k + 1); break;
        case TiePolicy::average: ranks[order[k]] = static_cast<double>(start + 1 + end) / 2.0; break;
        case TiePolicy::competition: ranks[order[k]] = static_cast<double>(start + 1); break;
      }
    }
    start = end;
  }
  return ranks;
}

struct RankVector {
  double overfit = 1;
  double accuracy = 1;
  double loss = 1;
  double sensitivity = 1;
  double specificity = 1;

  friend bool operator==(const RankVector&, const RankVector&) = default;
};

struct Weights {
  double overfit = 3.0;
  double accuracy = 2.0;
  double loss = 1.5;
  double sensitivity = 1.0;
  double specificity = 0.25;

  void validate() const {
    for (double w : {overfit, accuracy, loss, sensitivity, specificity}) {
      detail::require(std::isfinite(w) && w >= 0.0, "weights must be finite and non-negative");
    }
  }

  friend bool operator==(const Weights&, const Weights&) = default;
};

/// Parses "w1,w2,w3,w4,w5" in (overfit, accuracy, loss, sensitivity, specificity) order.
inline Weights parse_weights(std::string_view s) {
  auto v = text::parse_list(s, "weights");
  if (v.size() != 5) throw ParseError("weights: expected 5 comma-separated values, got " + std::to_string(v.size()));
  Weights w{v[0], v[1], v[2], v[3], v[4]};
  w.validate();
  return w;
}

struct ScoreBreakdown {
  double overfit_term = 0;
  double accuracy_term = 0;
  double loss_term = 0;
  double sensitivity_term = 0;
  double specificity_term = 0;
  double total = 0;
  Weights weights;
  std::size_t stage_size = 0;
};

/// Score with an arbitrary reflection constant in place of N + 1. The leaderboard
/// order does not depend on `reflect`; only the absolute totals shift.
inline ScoreBreakdown score_with_reflection(const RankVector& r, std::size_t n, double reflect, const Weights& w) {
  detail::require(n >= 1, "stage size must be at least 1");
  w.validate();
  const double hi = static_cast<double>(n);
  for (double rank : {r.overfit, r.accuracy, r.loss, r.sensitivity, r.specificity}) {
    detail::require(std::isfinite(rank) && rank >= 1.0 && rank <= hi,
                    "rank " + text::shortest(rank) + " outside [1, " + std::to_string(n) + "]");
  }
  ScoreBreakdown s;
  s.overfit_term = w.overfit * r.overfit;
  s.accuracy_term = w.accuracy * (reflect - r.accuracy);
  s.loss_term = w.loss * r.loss;
  s.sensitivity_term = w.sensitivity * (reflect - r.sensitivity);
  s.specificity_term = w.specificity * (reflect - r.specificity);
  s.total = s.overfit_term + s.accuracy_term + s.loss_term + s.sensitivity_term + s.specificity_term;
  s.weights = w;
  s.stage_size = n;
  return s;
}

inline ScoreBreakdown overall_score(const RankVector& ranks, std::size_t n, const Weights& w = {}) {
  return score_with_reflection(ranks, n, static_cast<double>(n) + 1.0, w);
}

/// One trained model's results within a stage.
struct RunRecord {
  std::string model_name;
  MetricSet metrics;
  std::optional<std::uint64_t> param_count;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct Standing {
  RunRecord record;
  std::size_t input_index = 0;
  RankVector ranks;
  ScoreBreakdown score;
  std::size_t final_rank = 0;
};

struct StageResult {
  /// Leaderboard order: standings[0] is the winner.
  std::vector<Standing> standings;
  TiePolicy tie_policy = TiePolicy::ordinal;
  Weights weights;

  const std::string& winner() const { return standings.front().record.model_name; }
  std::size_t size() const { return standings.size(); }

  /// Standings in the order the records were supplied.
  std::vector<const Standing*> in_input_order() const {
    std::vector<const Standing*> out(standings.size());
    for (const auto& s : standings) out[s.input_index] = &s;
    return out;
  }

  std::vector<std::size_t> final_ranks_in_input_order() const {
    std::vector<std::size_t> out;
    for (const auto* s : in_input_order()) out.push_back(s->final_rank);
    return out;
  }

  const Standing& find(std::string_view model) const {
    for (const auto& s : standings) {
      if (s.record.model_name == model) return s;
    }
    throw ValidationError("no model named '" + std::string(model) + "' in stage");
  }
};

inline void validate_records(std::span<const RunRecord> records) {
  if (records.empty()) throw ValidationError("no records");
  std::unordered_set<std::string_view> seen;
  for (const auto& r : records) {
    detail::require(!r.model_name.empty(), "model name must not be empty");
    if (!seen.insert(r.model_name).second) throw ValidationError("duplicate model name '" + r.model_name + "'");
    try {
      r.metrics.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("model '" + r.model_name + "': " + e.what());
    }
  }
}

/// Computes the five rank vectors for a stage, aligned with `records`.
inline std::vector<RankVector> stage_ranks(std::span<const RunRecord> records, TiePolicy policy) {
  auto column = [&](auto field) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records) v.push_back(r.metrics.*field);
    return metric_ranks(v, policy);
  };
  const auto overfit = column(&MetricSet::overfitting);
  const auto acc = column(&MetricSet::val_accuracy);
  const auto loss = column(&MetricSet::val_loss);
  const auto sens = column(&MetricSet::sensitivity);
  const auto spec = column(&MetricSet::specificity);
  std::vector<RankVector> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) out[i] = {overfit[i], acc[i], loss[i], sens[i], spec[i]};
  return out;
}

/// Ranks a whole stage and returns the leaderboard.
///
/// Throws if two models tie on total score and either lacks a parameter count.
/// Models tied on both score and parameter count keep their input order.
inline StageResult rank_stage(std::span<const RunRecord> records, TiePolicy policy = TiePolicy::ordinal,
                              const Weights& weights = {}) {
  validate_records(records);
  weights.validate();
  const auto ranks = stage_ranks(records, policy);

  StageResult result;
  result.tie_policy = policy;
  result.weights = weights;
  result.standings.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    result.standings.push_back({records[i], i, ranks[i], overall_score(ranks[i], records.size(), weights), 0});
  }

  auto& st = result.standings;
  for (std::size_t i = 0; i < st.size(); ++i) {
    for (std::size_t j = i + 1; j < st.size(); ++j) {
      if (st[i].score.total == st[j].score.total && (!st[i].record.param_count || !st[j].record.param_count)) {
        throw ValidationError("score tie between '" + st[i].record.model_name + "' and '" +
                              st[j].record.model_name + "' (total " + text::fixed(st[i].score.total) +
                              ") cannot be broken: parameter count missing");
      }
    }
  }
  std::stable_sort(st.begin(), st.end(), [](const Standing& a, const Standing& b) {
    if (a.score.total != b.score.total) return a.score.total > b.score.total;
    return a.record.param_count.value_or(0) < b.record.param_count.value_or(0);
  });
  for (std::size_t i = 0; i < st.size(); ++i) st[i].final_rank = i + 1;
  return result;
}

}  // namespace tlselect
