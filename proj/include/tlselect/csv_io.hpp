#pragma once

// CSV readers and writers for run records, prediction logs and
// validation/test metric triples.
//
// Run records:  model,overfitting,val_accuracy,val_loss,sensitivity,specificity,params
// Predictions:  example_id,true_label,p_healthy,p_diseased
// Triples:      split,accuracy,sensitivity,specificity   (rows "val" and "test")
//
// Fields containing ',' or '"' are double-quoted with '"' doubled, which the
// run-record format needs for names such as "Adam, MSE".

#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tlselect/error.hpp"
#include "tlselect/metrics.hpp"
#include "tlselect/ranking.hpp"
#include "tlselect/text.hpp"

namespace tlselect::csv {

inline constexpr std::string_view kRunsHeader = "model,overfitting,val_accuracy,val_loss,sensitivity,specificity,params";
inline constexpr std::string_view kPredictionsHeader = "example_id,true_label,p_healthy,p_diseased";
inline constexpr std::string_view kTriplesHeader = "split,accuracy,sensitivity,specificity";

inline std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

namespace detail {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Splits text into data rows after checking the header. Blank lines are skipped.
inline std::vector<Row> read_table(std::string_view content, std::string_view expected_header,
                                   std::string_view source) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::istringstream in{std::string(content)};
  std::string line;
  const auto ncols = text::split(expected_header, ',').size();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (line != expected_header) {
        throw ParseError(std::string(source) + ": header mismatch: expected '" + std::string(expected_header) +
                         "', found '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    if (text::trim(line).empty()) continue;
    Row r{line_no, {}};
    try {
      r.fields = split_row(line);
    } catch (const ParseError& e) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (r.fields.size() != ncols) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected " + std::to_string(ncols) +
                       " fields, found " + std::to_string(r.fields.size()));
    }
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(std::string(source) + ": empty file (missing header)");
  if (rows.empty()) throw ValidationError(std::string(source) + ": no records");
  return rows;
}

template <typename F>
auto at_line(std::string_view source, std::size_t line, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + e.what());
  }
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace detail

inline std::vector<RunRecord> parse_runs(std::string_view content, std::string_view source = "<runs>") {
  std::vector<RunRecord> out;
  for (const auto& row : detail::read_table(content, kRunsHeader, source)) {
    out.push_back(detail::at_line(source, row.line, [&] {
      const auto& f = row.fields;
      RunRecord r;
      r.model_name = std::string(text::trim(f[0]));
      if (r.model_name.empty()) throw ValidationError("empty model name");
      r.metrics.overfitting = text::parse_double(f[1], "overfitting");
      r.metrics.val_accuracy = text::parse_double(f[2], "val_accuracy");
      r.metrics.val_loss = text::parse_double(f[3], "val_loss");
      r.metrics.sensitivity = text::parse_double(f[4], "sensitivity");
      r.metrics.specificity = text::parse_double(f[5], "specificity");
      if (!text::trim(f[6]).empty()) r.param_count = text::parse_count(f[6], "params");
      try {
        r.metrics.validate();
      } catch (const ValidationError& e) {
        throw ValidationError("model '" + r.model_name + "': " + e.what());
      }
      return r;
    }));
  }
  return out;
}

/// Writes numbers in shortest round-trip form so parse_runs(write_runs(x)) == x.
inline std::string write_runs(std::span<const RunRecord> records) {
  std::string out(kRunsHeader);
  out += '\n';
  for (const auto& r : records) {
    const auto& m = r.metrics;
    out += quote(r.model_name) + ',' + text::shortest(m.overfitting) + ',' + text::shortest(m.val_accuracy) + ',' +
           text::shortest(m.val_loss) + ',' + text::shortest(m.sensitivity) + ',' + text::shortest(m.specificity) +
           ',' + (r.param_count ? std::to_string(*r.param_count) : std::string()) + '\n';
  }
  return out;
}

inline std::vector<RunRecord> load_runs(const std::filesystem::path& path) {
  return parse_runs(detail::read_text(path), path.string());
}

inline void save_runs(const std::filesystem::path& path, std::span<const RunRecord> records) {
  detail::write_text(path, write_runs(records));
}

inline std::vector<PredictionRecord> parse_predictions(std::string_view content,
                                                       std::string_view source = "<predictions>") {
  std::vector<PredictionRecord> out;
  for (const auto& row : detail::read_table(content, kPredictionsHeader, source)) {
    out.push_back(detail::at_line(source, row.line, [&] {
      const auto& f = row.fields;
      PredictionRecord r{std::string(text::trim(f[0])), parse_label(text::trim(f[1])),
                         text::parse_double(f[2], "p_healthy"), text::parse_double(f[3], "p_diseased")};
      r.validate();
      return r;
    }));
  }
  return out;
}

inline std::string write_predictions(std::span<const PredictionRecord> records) {
  std::string out(kPredictionsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.example_id + ',' + std::string(to_string(r.true_label)) + ',' + text::shortest(r.p_healthy) + ',' +
           text::shortest(r.p_diseased) + '\n';
  }
  return out;
}

inline std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  return parse_predictions(detail::read_text(path), path.string());
}

struct ValTestTriples {
  MetricTriple val;
  MetricTriple test;
};

inline ValTestTriples parse_triples(std::string_view content, std::string_view source = "<triples>") {
  std::optional<MetricTriple> val, test;
  for (const auto& row : detail::read_table(content, kTriplesHeader, source)) {
    detail::at_line(source, row.line, [&] {
      const auto& f = row.fields;
      MetricTriple t{text::parse_double(f[1], "accuracy"), text::parse_double(f[2], "sensitivity"),
                     text::parse_double(f[3], "specificity")};
      t.validate();
      const auto which = text::trim(f[0]);
      if (which == "val") val = t;
      else if (which == "test") test = t;
      else throw ParseError("split must be 'val' or 'test', got '" + std::string(which) + "'");
      return 0;
    });
  }
  if (!val || !test) throw ValidationError(std::string(source) + ": need one 'val' row and one 'test' row");
  return {*val, *test};
}

inline ValTestTriples load_triples(const std::filesystem::path& path) {
  return parse_triples(detail::read_text(path), path.string());
}

}  // namespace tlselect::csv
