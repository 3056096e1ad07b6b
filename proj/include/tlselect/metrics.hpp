#pragma once

// Binary classification metrics over prediction logs, plus the comparison
// quantities used for generalization checks and baseline comparisons.
//
// Class convention: `diseased` is the positive class, `healthy` the negative.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tlselect/error.hpp"
#include "tlselect/text.hpp"

namespace tlselect {

enum class Label { healthy, diseased };

inline std::string_view to_string(Label label) {
  return label == Label::diseased ? "diseased" : "healthy";
}

inline Label parse_label(std::string_view s) {
  if (s == "healthy") return Label::healthy;
  if (s == "diseased") return Label::diseased;
  throw ParseError("unknown label '" + std::string(s) + "' (expected healthy or diseased)");
}

inline constexpr double kProbabilitySumTolerance = 1e-6;
inline constexpr double kDefaultThreshold = 0.5;
/// Probabilities are clamped to [kCceEpsilon, 1] before taking the log.
inline constexpr double kCceEpsilon = 1e-12;

struct PredictionRecord {
  std::string example_id;
  Label true_label = Label::healthy;
  double p_healthy = 0.0;
  double p_diseased = 0.0;

  double probability_of(Label label) const { return label == Label::diseased ? p_diseased : p_healthy; }

  void validate() const {
    auto in_unit = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
    if (!in_unit(p_healthy) || !in_unit(p_diseased) ||
        std::abs(p_healthy + p_diseased - 1.0) > kProbabilitySumTolerance) {
      throw ValidationError("example '" + example_id + "': malformed probability pair (" +
                            text::shortest(p_healthy) + ", " + text::shortest(p_diseased) + ")");
    }
  }
  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;

  std::uint64_t positives() const { return tp + fn; }
  std::uint64_t negatives() const { return tn + fp; }
  std::uint64_t total() const { return tp + fn + tn + fp; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Hard-label rule: predicted diseased iff p_diseased >= threshold (ties go to diseased).
inline ConfusionMatrix confusion_from_predictions(std::span<const PredictionRecord> records,
                                                  double threshold = kDefaultThreshold) {
  if (records.empty()) throw ValidationError("no records");
  detail::require(std::isfinite(threshold) && threshold >= 0.0 && threshold <= 1.0,
                  "threshold must be in [0, 1], got " + text::shortest(threshold));
  ConfusionMatrix cm;
  for (const auto& r : records) {
    r.validate();
    const bool predicted_diseased = r.p_diseased >= threshold;
    if (r.true_label == Label::diseased) {
      ++(predicted_diseased ? cm.tp : cm.fn);
    } else {
      ++(predicted_diseased ? cm.fp : cm.tn);
    }
  }
  return cm;
}

inline double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw UndefinedMetricError("undefined accuracy: confusion matrix is empty");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

inline double sensitivity(const ConfusionMatrix& cm) {
  if (cm.positives() == 0) throw UndefinedMetricError("undefined sensitivity: no diseased records");
  return static_cast<double>(cm.tp) / static_cast<double>(cm.positives());
}

inline double specificity(const ConfusionMatrix& cm) {
  if (cm.negatives() == 0) throw UndefinedMetricError("undefined specificity: no healthy records");
  return static_cast<double>(cm.tn) / static_cast<double>(cm.negatives());
}

namespace detail {

inline void require_fraction(double v, std::string_view name) {
  require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
          std::string(name) + " must be in [0, 1], got " + text::shortest(v));
}

}  // namespace detail

/// Train accuracy minus validation accuracy. Negative values are kept.
inline double overfitting(double train_accuracy, double val_accuracy) {
  detail::require_fraction(train_accuracy, "train accuracy");
  detail::require_fraction(val_accuracy, "validation accuracy");
  return train_accuracy - val_accuracy;
}

enum class LossKind { cce, mse, mae };

inline std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::cce: return "cce";
    case LossKind::mse: return "mse";
    case LossKind::mae: return "mae";
  }
  return "?";
}

inline LossKind parse_loss_kind(std::string_view s) {
  if (s == "cce" || s == "CCE") return LossKind::cce;
  if (s == "mse" || s == "MSE") return LossKind::mse;
  if (s == "mae" || s == "MAE") return LossKind::mae;
  throw ParseError("unknown loss kind '" + std::string(s) + "' (expected cce, mse or mae)");
}

/// Mean per-record loss. MSE and MAE average over both class components of the
/// one-hot target, so a single record contributes ((p_h - y_h)^2 + (p_d - y_d)^2) / 2.
inline double loss_value(std::span<const PredictionRecord> records, LossKind kind) {
  if (records.empty()) throw ValidationError("no records");
  double sum = 0.0;
  for (const auto& r : records) {
    r.validate();
    const double y_d = r.true_label == Label::diseased ? 1.0 : 0.0;
    const double y_h = 1.0 - y_d;
    switch (kind) {
      case LossKind::cce:
        sum -= std::log(std::clamp(r.probability_of(r.true_label), kCceEpsilon, 1.0));
        break;
      case LossKind::mse: {
        const double dh = r.p_healthy - y_h;
        const double dd = r.p_diseased - y_d;
        sum += (dh * dh + dd * dd) / 2.0;
        break;
      }
      case LossKind::mae:
        sum += (std::abs(r.p_healthy - y_h) + std::abs(r.p_diseased - y_d)) / 2.0;
        break;
    }
  }
  return sum / static_cast<double>(records.size());
}

/// The (accuracy, sensitivity, specificity) triple used for validation vs test checks.
struct MetricTriple {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;

  void validate() const {
    detail::require_fraction(accuracy, "accuracy");
    detail::require_fraction(sensitivity, "sensitivity");
    detail::require_fraction(specificity, "specificity");
  }

  friend bool operator==(const MetricTriple&, const MetricTriple&) = default;
};

inline MetricTriple abs_deltas(const MetricTriple& val, const MetricTriple& test) {
  val.validate();
  test.validate();
  return {std::abs(val.accuracy - test.accuracy), std::abs(val.sensitivity - test.sensitivity),
          std::abs(val.specificity - test.specificity)};
}

/// The five evaluation metrics recorded for one trained model.
struct MetricSet {
  double overfitting = 0.0;
  double val_accuracy = 0.0;
  double val_loss = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;

  void validate() const {
    detail::require(std::isfinite(overfitting) && overfitting >= -1.0 && overfitting <= 1.0,
                    "overfitting must be in [-1, 1], got " + text::shortest(overfitting));
    detail::require_fraction(val_accuracy, "val_accuracy");
    detail::require(std::isfinite(val_loss) && val_loss >= 0.0,
                    "val_loss must be finite and non-negative, got " + text::shortest(val_loss));
    detail::require_fraction(sensitivity, "sensitivity");
    detail::require_fraction(specificity, "specificity");
  }

  friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

/// Change of one metric from a baseline to a final model.
struct MetricChange {
  double baseline = 0.0;
  double final = 0.0;
  double abs_delta = 0.0;
  /// (final - baseline) / baseline; empty when the baseline is not strictly positive.
  std::optional<double> relative;
};

struct ComparisonReport {
  MetricChange overfitting;
  MetricChange val_accuracy;
  MetricChange val_loss;
  MetricChange sensitivity;
  MetricChange specificity;
  /// baseline.val_loss / final.val_loss; empty when the final loss is zero.
  std::optional<double> loss_ratio;
};

inline ComparisonReport relative_comparison(const MetricSet& final, const MetricSet& baseline) {
  final.validate();
  baseline.validate();
  auto change = [](double b, double f) {
    MetricChange c{b, f, std::abs(f - b), std::nullopt};
    if (b > 0.0) c.relative = (f - b) / b;
    return c;
  };
  ComparisonReport r{change(baseline.overfitting, final.overfitting),
                     change(baseline.val_accuracy, final.val_accuracy),
                     change(baseline.val_loss, final.val_loss),
                     change(baseline.sensitivity, final.sensitivity),
                     change(baseline.specificity, final.specificity),
                     std::nullopt};
  if (final.val_loss > 0.0) r.loss_ratio = baseline.val_loss / final.val_loss;
  return r;
}

}  // namespace tlselect
