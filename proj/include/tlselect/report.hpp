#pragma once

// Leaderboard rendering. Rows follow input order with a Rank column, matching
// the layout of published stage tables. Output is byte-stable: no timestamps,
// no locale-dependent formatting.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "tlselect/csv_io.hpp"
#include "tlselect/json_io.hpp"
#include "tlselect/ranking.hpp"
#include "tlselect/text.hpp"

namespace tlselect {

enum class ReportFormat { table, csv, json };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "table") return ReportFormat::table;
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw ParseError("unknown format '" + std::string(s) + "' (expected table, csv or json)");
}

struct ReportOptions {
  std::string title;
  bool breakdown = false;
};

namespace detail {

inline std::string weights_label(const Weights& w) {
  return text::shortest(w.overfit) + ", " + text::shortest(w.accuracy) + ", " + text::shortest(w.loss) + ", " +
         text::shortest(w.sensitivity) + ", " + text::shortest(w.specificity);
}

inline std::string render_table(const StageResult& r, const ReportOptions& opt) {
  std::vector<std::string> header = {"Model", "Overfitting", "Validation acc.", "Loss", "Sensitivity", "Specificity",
                                     "Rank", "Score"};
  if (opt.breakdown) {
    for (const char* h : {"Overfit term", "Acc. term", "Loss term", "Sens. term", "Spec. term"}) header.emplace_back(h);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto* s : r.in_input_order()) {
    const auto& m = s->record.metrics;
    std::vector<std::string> row = {s->record.model_name,     text::fixed(m.overfitting), text::fixed(m.val_accuracy),
                                    text::fixed(m.val_loss),  text::fixed(m.sensitivity), text::fixed(m.specificity),
                                    std::to_string(s->final_rank), text::fixed(s->score.total)};
    if (opt.breakdown) {
      for (double t : {s->score.overfit_term, s->score.accuracy_term, s->score.loss_term, s->score.sensitivity_term,
                       s->score.specificity_term}) {
        row.push_back(text::fixed(t));
      }
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto pad = std::string(width[c] - cells[c].size(), ' ');
      // Model names left-aligned, numbers right-aligned.
      out += c == 0 ? cells[c] + pad : pad + cells[c];
      if (c + 1 < cells.size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + '\n';
  };

  std::string out;
  if (!opt.title.empty()) out += opt.title + '\n';
  out += line(header);
  std::size_t total_width = 0;
  for (auto w : width) total_width += w;
  out += std::string(total_width + 2 * (width.size() - 1), '-') + '\n';
  for (const auto& row : rows) out += line(row);
  out += "winner: " + r.winner() + '\n';
  out += "weights (overfit, accuracy, loss, sensitivity, specificity): " + weights_label(r.weights) + '\n';
  out += "tie policy: " + std::string(to_string(r.tie_policy)) + "; N = " + std::to_string(r.size()) + '\n';
  return out;
}

inline std::string render_csv(const StageResult& r) {
  std::string out =
      "model,overfitting,val_accuracy,val_loss,sensitivity,specificity,rank,score,"
      "overfit_term,accuracy_term,loss_term,sensitivity_term,specificity_term\n";
  for (const auto* s : r.in_input_order()) {
    const auto& m = s->record.metrics;
    const auto& sc = s->score;
    out += csv::quote(s->record.model_name);
    for (double v : {m.overfitting, m.val_accuracy, m.val_loss, m.sensitivity, m.specificity}) out += ',' + text::fixed(v);
    out += ',' + std::to_string(s->final_rank);
    for (double v : {sc.total, sc.overfit_term, sc.accuracy_term, sc.loss_term, sc.sensitivity_term,
                     sc.specificity_term}) {
      out += ',' + text::fixed(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace detail

inline std::string render_report(const StageResult& r, ReportFormat format, const ReportOptions& opt = {}) {
  switch (format) {
    case ReportFormat::table: return detail::render_table(r, opt);
    case ReportFormat::csv: return detail::render_csv(r);
    case ReportFormat::json: return json::to_json(r).dump(2) + '\n';
  }
  return {};
}

inline std::string render_report(const StageOutcome& o, ReportFormat format, ReportOptions opt = {}) {
  if (format == ReportFormat::json) return json::to_json(o).dump(2) + '\n';
  if (opt.title.empty() && format == ReportFormat::table) {
    opt.title = std::string(to_string(o.config.stage)) + " (N = " + std::to_string(o.result.size()) + ")";
    if (!o.config.defaults.base_architecture.empty()) opt.title += ", base " + o.config.defaults.base_architecture;
  }
  return render_report(o.result, format, opt);
}

inline StageResult parse_report_json(std::string_view text) {
  try {
    return json::stage_result_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("stage result: ") + e.what());
  }
}

}  // namespace tlselect
