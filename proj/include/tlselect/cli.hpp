#pragma once

// Command-line front end. cli_main is callable in-process with explicit output
// streams so tests can drive every subcommand without spawning a process.
//
// Exit status: 0 success, 1 invalid input or I/O failure, 2 usage error,
// 3 generalization check failed.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlselect/augment.hpp"
#include "tlselect/csv_io.hpp"
#include "tlselect/dataset_plan.hpp"
#include "tlselect/fixtures.hpp"
#include "tlselect/json_io.hpp"
#include "tlselect/metrics.hpp"
#include "tlselect/pnm.hpp"
#include "tlselect/protocol.hpp"
#include "tlselect/ranking.hpp"
#include "tlselect/report.hpp"

namespace tlselect::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;

namespace detail {

inline MetricTriple parse_triple(const std::string& s, std::string_view what) {
  auto v = text::parse_list(s, what);
  if (v.size() != 3) throw ParseError(std::string(what) + ": expected accuracy,sensitivity,specificity");
  return {v[0], v[1], v[2]};
}

inline std::string metric_or_undefined(double (*fn)(const ConfusionMatrix&), const ConfusionMatrix& cm) {
  try {
    return text::fixed(fn(cm));
  } catch (const UndefinedMetricError&) {
    return "undefined";
  }
}

inline std::string relative_label(const std::optional<double>& rel) {
  if (!rel) return "undefined";
  return (*rel >= 0 ? "+" : "") + text::fixed(*rel * 100.0, 4) + "%";
}

inline const RunRecord& pick(const std::vector<RunRecord>& runs, const std::string& model, std::string_view file) {
  if (model.empty()) {
    if (runs.size() != 1) {
      throw ValidationError(std::string(file) + " holds " + std::to_string(runs.size()) + " records; pass --model");
    }
    return runs.front();
  }
  for (const auto& r : runs) {
    if (r.model_name == model) return r;
  }
  throw ValidationError("no model '" + model + "' in " + std::string(file));
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Rank transfer-learning candidates, compute evaluation metrics, and plan dataset augmentation.",
               "tlselect"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // rank
  auto* rank = app.add_subcommand("rank", "Rank the models of one stage by weighted overall score");
  std::string rank_runs, rank_config, rank_stage_name, rank_policy = "ordinal", rank_weights, rank_format = "table";
  bool rank_breakdown = false;
  rank->add_option("--runs", rank_runs, "Run-record CSV")->required();
  rank->add_option("--stage-config", rank_config, "Stage config JSON; record names must match its candidates");
  rank->add_option("--stage", rank_stage_name, "Use the built-in stage1 or stage2 candidate list");
  rank->add_option("--tie-policy", rank_policy, "ordinal | average | competition");
  rank->add_option("--weights", rank_weights, "overfit,accuracy,loss,sensitivity,specificity (default 3,2,1.5,1,0.25)");
  rank->add_option("--format", rank_format, "table | csv | json");
  rank->add_flag("--breakdown", rank_breakdown, "Show the five weighted score terms in table output");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Evaluation metrics from a prediction log, or baseline comparison");
  std::string m_predictions, m_final, m_baseline, m_model;
  double m_threshold = kDefaultThreshold;
  std::optional<double> m_train_acc, m_val_acc;
  metrics->add_option("--predictions", m_predictions, "Prediction CSV: example_id,true_label,p_healthy,p_diseased");
  metrics->add_option("--threshold", m_threshold,
                      "Predict diseased when p_diseased >= threshold (default 0.5). CCE clamps probabilities to "
                      "[1e-12, 1] before the log");
  metrics->add_option("--train-acc", m_train_acc, "Train accuracy (with --val-acc: prints overfitting)");
  metrics->add_option("--val-acc", m_val_acc, "Validation accuracy");
  metrics->add_option("--final", m_final, "Run-record CSV holding the final model");
  metrics->add_option("--model", m_model, "Model name inside --final (needed when it has several rows)");
  metrics->add_option("--baseline", m_baseline, "Run-record CSV holding the baseline row");

  // plan
  auto* plan = app.add_subcommand("plan", "Replication factor b(c+1) and class totals");
  std::optional<std::uint64_t> p_count, p_b, p_c;
  std::string p_config;
  bool p_reference = false;
  plan->add_option("--count", p_count, "Source image count");
  plan->add_option("--b", p_b, "Orientation/zoom variants (>= 1)");
  plan->add_option("--c", p_c, "Noise variants per orientation, excluding the control");
  plan->add_option("--config", p_config, "Dataset config JSON listing sources and plans");
  plan->add_flag("--reference", p_reference, "Use the built-in four-source fundus dataset plan");

  // split
  auto* split = app.add_subcommand("split", "Train/val/test counts, optionally a shuffled manifest");
  std::optional<std::uint64_t> s_total, s_seed;
  std::string s_fractions = "0.6,0.2,0.2", s_config, s_manifest;
  bool s_reference = false;
  split->add_option("--total", s_total, "Number of images to split");
  split->add_option("--fractions", s_fractions, "train,val,test fractions (default 0.6,0.2,0.2)");
  split->add_option("--config", s_config, "Dataset config JSON (total comes from its sources)");
  split->add_flag("--reference", s_reference, "Use the built-in four-source fundus dataset plan");
  split->add_option("--seed", s_seed, "Shuffle seed for --manifest (default: config seed, else 42)");
  split->add_option("--manifest", s_manifest, "Write the shuffled manifest JSON here");

  // augment
  auto* augment = app.add_subcommand("augment", "Expand one PPM/PAM image into b(c+1) variants");
  std::string a_input, a_out_dir;
  std::uint64_t a_b = 1, a_c = 0, a_seed = 0;
  std::size_t a_size = kModelInputSize;
  int a_fill = 0;
  bool a_no_resize = false;
  augment->add_option("--input", a_input, "Input image (P6, or P7 with DEPTH 3/4)")->required();
  augment->add_option("--out-dir", a_out_dir, "Directory for the variants")->required();
  augment->add_option("--b", a_b, "Orientation/zoom variants");
  augment->add_option("--c", a_c, "Noise variants per orientation");
  augment->add_option("--seed", a_seed, "Noise seed");
  augment->add_option("--size", a_size, "Square resize target (default 128)");
  augment->add_option("--fill", a_fill, "Constant background for rotated/zoomed borders")->check(CLI::Range(0, 255));
  augment->add_flag("--no-resize", a_no_resize, "Keep the input dimensions");

  // verify
  auto* verify = app.add_subcommand("verify", "Compare validation and test metrics");
  std::string v_val, v_test, v_triples;
  double v_tolerance = kDefaultGeneralizationTolerance;
  verify->add_option("--val", v_val, "accuracy,sensitivity,specificity on validation");
  verify->add_option("--test", v_test, "accuracy,sensitivity,specificity on test");
  verify->add_option("--triples", v_triples, "CSV with val and test rows (alternative to --val/--test)");
  verify->add_option("--tolerance", v_tolerance, "Largest acceptable |val - test| (default 0.05)");

  // report
  auto* report = app.add_subcommand("report", "Re-render a JSON stage result");
  std::string r_result, r_format = "table";
  bool r_breakdown = false;
  report->add_option("--result", r_result, "JSON produced by `rank --format json`")->required();
  report->add_option("--format", r_format, "table | csv | json");
  report->add_flag("--breakdown", r_breakdown, "Show the five weighted score terms");

  // fixtures
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write the bundled fixture files");
  std::string f_out;
  fixtures_cmd->add_option("--out", f_out, "Destination directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (rank->parsed()) {
      const auto runs = csv::load_runs(rank_runs);
      const auto policy = parse_tie_policy(rank_policy);
      const auto weights = rank_weights.empty() ? Weights{} : parse_weights(rank_weights);
      const auto format = parse_report_format(rank_format);
      ReportOptions opt{"", rank_breakdown};
      std::optional<StageConfig> config;
      if (!rank_config.empty()) config = load_stage_config(rank_config);
      else if (rank_stage_name == "stage1") config = stage1_config();
      else if (rank_stage_name == "stage2") config = stage2_config();
      else if (!rank_stage_name.empty()) throw ParseError("--stage must be stage1 or stage2");
      if (config) {
        out << render_report(run_stage(*config, runs, policy, weights), format, opt);
      } else {
        out << render_report(rank_stage(runs, policy, weights), format, opt);
      }
      return kExitOk;
    }

    if (metrics->parsed()) {
      const int modes = !m_predictions.empty() + (m_train_acc || m_val_acc) + (!m_final.empty() || !m_baseline.empty());
      if (modes != 1) throw ValidationError("metrics: use exactly one of --predictions, --train-acc/--val-acc, "
                                            "or --final/--baseline");
      if (!m_predictions.empty()) {
        const auto records = csv::load_predictions(m_predictions);
        const auto cm = confusion_from_predictions(records, m_threshold);
        out << "records: " << records.size() << "\n"
            << "threshold: " << text::shortest(m_threshold) << "\n"
            << "confusion: tp=" << cm.tp << " fn=" << cm.fn << " tn=" << cm.tn << " fp=" << cm.fp << "\n"
            << "accuracy: " << detail::metric_or_undefined(&accuracy, cm) << "\n"
            << "sensitivity: " << detail::metric_or_undefined(&sensitivity, cm) << "\n"
            << "specificity: " << detail::metric_or_undefined(&specificity, cm) << "\n";
        for (auto kind : {LossKind::cce, LossKind::mse, LossKind::mae}) {
          out << "loss " << to_string(kind) << ": " << text::fixed(loss_value(records, kind)) << "\n";
        }
        return kExitOk;
      }
      if (m_train_acc || m_val_acc) {
        if (!m_train_acc || !m_val_acc) throw ValidationError("metrics: --train-acc and --val-acc go together");
        out << "overfitting: " << text::fixed(overfitting(*m_train_acc, *m_val_acc)) << "\n";
        return kExitOk;
      }
      if (m_final.empty() || m_baseline.empty()) throw ValidationError("metrics: --final and --baseline go together");
      const auto finals = csv::load_runs(m_final);
      const auto baselines = csv::load_runs(m_baseline);
      const auto& fin = detail::pick(finals, m_model, m_final);
      const auto& base = detail::pick(baselines, "", m_baseline);
      const auto cmp = relative_comparison(fin.metrics, base.metrics);
      out << "final: " << fin.model_name << "; baseline: " << base.model_name << "\n";
      auto row = [&](std::string_view name, const MetricChange& c) {
        out << name << ": baseline " << text::fixed(c.baseline) << ", final " << text::fixed(c.final) << ", |delta| "
            << text::fixed(c.abs_delta) << ", relative " << detail::relative_label(c.relative) << "\n";
      };
      row("overfitting", cmp.overfitting);
      row("val_accuracy", cmp.val_accuracy);
      row("val_loss", cmp.val_loss);
      row("sensitivity", cmp.sensitivity);
      row("specificity", cmp.specificity);
      out << "loss ratio (baseline / final): " << (cmp.loss_ratio ? text::fixed(*cmp.loss_ratio) : "undefined")
          << "\n";
      return kExitOk;
    }

    if (plan->parsed()) {
      if (p_reference || !p_config.empty()) {
        const auto sources = p_reference ? reference_sources() : json::dataset_config_from_json(json::load(p_config)).sources;
        for (const auto& s : sources) {
          out << s.source.name << " (" << to_string(s.source.label) << "): " << s.source.image_count << " x "
              << s.plan.b << " x (" << s.plan.c << "+1) = " << augmented_count(s.source, s.plan) << "\n";
        }
        const auto t = class_totals(sources);
        out << "healthy: " << t.healthy << "\ndiseased: " << t.diseased << "\ntotal: " << t.grand << "\n";
        return kExitOk;
      }
      if (!p_b) throw ValidationError("plan: --b is required (or use --config / --reference)");
      const AugmentationPlan ap{*p_b, p_c.value_or(0)};
      out << "replication factor: " << replication_factor(ap) << "\n";
      if (p_count) out << "augmented count: " << augmented_count({"input", Label::healthy, *p_count}, ap) << "\n";
      return kExitOk;
    }

    if (split->parsed()) {
      auto spec = parse_split_spec(s_fractions);
      std::vector<PlannedSource> sources;
      std::optional<std::uint64_t> seed = s_seed;
      if (s_reference) {
        sources = reference_sources();
      } else if (!s_config.empty()) {
        auto cfg = json::dataset_config_from_json(json::load(s_config));
        sources = std::move(cfg.sources);
        if (!split->count("--fractions")) spec = cfg.spec;
        if (!seed) seed = cfg.seed;
      }
      if (sources.empty()) {
        if (!s_total) throw ValidationError("split: --total is required (or use --config / --reference)");
        if (!s_manifest.empty()) throw ValidationError("split: --manifest needs --config or --reference");
        const auto c = allocate_split(*s_total, spec);
        out << c.train << ' ' << c.val << ' ' << c.test << "\n";
        return kExitOk;
      }
      if (s_manifest.empty()) {
        const auto c = allocate_split(class_totals(sources).grand, spec);
        out << c.train << ' ' << c.val << ' ' << c.test << "\n";
        return kExitOk;
      }
      const auto manifest = build_manifest(sources, spec, seed.value_or(42));
      csv::detail::write_text(s_manifest, json::to_json(manifest).dump(1) + "\n");
      const auto c = manifest.counts();
      out << c.train << ' ' << c.val << ' ' << c.test << "\n";
      return kExitOk;
    }

    if (augment->parsed()) {
      Image img = truncate_channels(pnm::read_file(a_input));
      if (!a_no_resize) img = resize(img, a_size, a_size);
      const AugmentationPlan ap{a_b, a_c};
      const auto specs = default_orient_specs(a_b, static_cast<std::uint8_t>(a_fill));
      const auto variants = augment_image(img, ap, specs, a_seed);
      std::filesystem::create_directories(a_out_dir);
      const auto stem = std::filesystem::path(a_input).stem().string();
      for (std::size_t k = 0; k < variants.size(); ++k) {
        pnm::write_file(std::filesystem::path(a_out_dir) / (stem + "_v" + std::to_string(k) + ".ppm"), variants[k]);
      }
      out << "wrote " << variants.size() << " images to " << a_out_dir << "\n";
      return kExitOk;
    }

    if (verify->parsed()) {
      MetricTriple val, test;
      if (!v_triples.empty()) {
        const auto t = csv::load_triples(v_triples);
        val = t.val;
        test = t.test;
      } else {
        if (v_val.empty() || v_test.empty()) throw ValidationError("verify: --val and --test are required");
        val = detail::parse_triple(v_val, "--val");
        test = detail::parse_triple(v_test, "--test");
      }
      const auto r = verify_generalization(val, test, v_tolerance);
      out << "accuracy difference: " << text::fixed(r.deltas.accuracy) << "\n"
          << "sensitivity difference: " << text::fixed(r.deltas.sensitivity) << "\n"
          << "specificity difference: " << text::fixed(r.deltas.specificity) << "\n"
          << "tolerance: " << text::shortest(r.tolerance) << "\n"
          << (r.passed ? "PASS" : "FAIL") << "\n";
      if (!r.passed) {
        err << "error: generalization check failed at tolerance " << text::shortest(r.tolerance) << "\n";
        return kExitCheckFailed;
      }
      return kExitOk;
    }

    if (report->parsed()) {
      const auto result = json::stage_result_from_json(json::load(r_result));
      out << render_report(result, parse_report_format(r_format), {"", r_breakdown});
      return kExitOk;
    }

    if (fixtures_cmd->parsed()) {
      for (const auto& p : fixtures::write_all(f_out)) out << p.string() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}

}  // namespace tlselect::cli
