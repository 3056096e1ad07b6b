#pragma once

// Class-balancing arithmetic and deterministic train/val/test allocation.
//
// Each source image is replicated b * (c + 1) times: b orientation/zoom
// variants, each emitted as a control plus c noise variants. A plain
// "k copies" scheme is the degenerate plan b = k, c = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlselect/error.hpp"
#include "tlselect/metrics.hpp"
#include "tlselect/rng.hpp"
#include "tlselect/text.hpp"

namespace tlselect {

struct ClassSource {
  std::string name;
  Label label = Label::healthy;
  std::uint64_t image_count = 1;
};

struct AugmentationPlan {
  std::uint64_t b = 1;  ///< orientation/zoom variants
  std::uint64_t c = 0;  ///< noise variants per orientation, excluding the control

  friend bool operator==(const AugmentationPlan&, const AugmentationPlan&) = default;
};

struct PlannedSource {
  ClassSource source;
  AugmentationPlan plan;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::string_view what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ValidationError(std::string(what) + ": count overflows 64 bits");
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, std::string_view what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ValidationError(std::string(what) + ": count overflows 64 bits");
  return out;
}

}  // namespace detail

inline std::uint64_t replication_factor(const AugmentationPlan& plan) {
  detail::require(plan.b >= 1, "augmentation plan: b must be at least 1");
  return detail::checked_mul(plan.b, detail::checked_add(plan.c, 1, "plan"), "replication factor");
}

inline std::uint64_t augmented_count(const ClassSource& source, const AugmentationPlan& plan) {
  detail::require(source.image_count >= 1, "source '" + source.name + "': image_count must be at least 1");
  return detail::checked_mul(source.image_count, replication_factor(plan), "source '" + source.name + "'");
}

struct ClassTotals {
  std::uint64_t healthy = 0;
  std::uint64_t diseased = 0;
  std::uint64_t grand = 0;

  friend bool operator==(const ClassTotals&, const ClassTotals&) = default;
};

inline ClassTotals class_totals(std::span<const PlannedSource> sources) {
  if (sources.empty()) throw ValidationError("no sources");
  ClassTotals t;
  for (const auto& s : sources) {
    const auto n = augmented_count(s.source, s.plan);
    auto& bucket = s.source.label == Label::diseased ? t.diseased : t.healthy;
    bucket = detail::checked_add(bucket, n, "class total");
  }
  t.grand = detail::checked_add(t.healthy, t.diseased, "grand total");
  return t;
}

/// The four sources and plans of the reference fundus dataset.
inline std::vector<PlannedSource> reference_sources() {
  return {
      {{"ORIGA-healthy", Label::healthy, 482}, {3, 1}},
      {{"EYEPACS-healthy", Label::healthy, 3000}, {1, 0}},
      {{"ORIGA-glaucoma", Label::diseased, 168}, {4, 3}},
      {{"EYEPACS-retinopathy", Label::diseased, 987}, {3, 0}},
  };
}

enum class Split { train, val, test };

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw ParseError("unknown split '" + std::string(s) + "'");
}

struct SplitSpec {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;

  void validate() const {
    for (double f : {train, val, test}) {
      detail::require(std::isfinite(f) && f >= 0.0, "split fractions must be finite and non-negative");
    }
    detail::require(std::abs(train + val + test - 1.0) <= 1e-9,
                    "split fractions must sum to 1, got " + text::shortest(train + val + test));
  }

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

inline SplitSpec parse_split_spec(std::string_view s) {
  auto v = text::parse_list(s, "fractions");
  if (v.size() != 3) throw ParseError("fractions: expected 3 comma-separated values, got " + std::to_string(v.size()));
  SplitSpec spec{v[0], v[1], v[2]};
  spec.validate();
  return spec;
}

struct SplitCounts {
  std::uint64_t train = 0;
  std::uint64_t val = 0;
  std::uint64_t test = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

namespace detail {

/// floor(total * fraction), treating products within 1e-9 (relative) of an integer as that integer,
/// so 10 * 0.6 counts as 6 regardless of how 0.6 rounds in binary.
inline std::uint64_t floor_share(std::uint64_t total, double fraction) {
  const double product = static_cast<double>(total) * fraction;
  const double nearest = std::round(product);
  if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, product)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::floor(product));
}

}  // namespace detail

/// train = floor(total * f_train), val = floor(total * f_val), test takes the remainder.
inline SplitCounts allocate_split(std::uint64_t total, const SplitSpec& spec = {}) {
  detail::require(total >= 1, "total must be at least 1");
  spec.validate();
  SplitCounts c;
  c.train = detail::floor_share(total, spec.train);
  c.val = detail::floor_share(total, spec.val);
  if (c.train > total || c.val > total - c.train) {
    throw ValidationError("split fractions allocate more than " + std::to_string(total) + " images");
  }
  c.test = total - c.train - c.val;
  return c;
}

struct ManifestEntry {
  std::string ref;
  Label label = Label::healthy;
  std::string source;
  Split split = Split::train;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  std::string generator = rng::kGeneratorName;
  SplitSpec spec;
  std::vector<ManifestEntry> entries;

  SplitCounts counts() const {
    SplitCounts c;
    for (const auto& e : entries) {
      ++(e.split == Split::train ? c.train : e.split == Split::val ? c.val : c.test);
    }
    return c;
  }

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Reference string for variant `variant` of image `image` in `source`, e.g. "ORIGA-healthy/000017/v3".
inline std::string image_ref(std::string_view source, std::uint64_t image, std::uint64_t variant) {
  std::string idx = std::to_string(image);
  if (idx.size() < 6) idx.insert(0, 6 - idx.size(), '0');
  return std::string(source) + "/" + idx + "/v" + std::to_string(variant);
}

/// Expands every source into its replicated references (source order, then image, then variant),
/// shuffles the whole list once with mt19937_64(seed), and cuts it into train/val/test.
inline DatasetManifest build_manifest(std::span<const PlannedSource> sources, const SplitSpec& spec,
                                      std::uint64_t seed) {
  const auto totals = class_totals(sources);
  const auto counts = allocate_split(totals.grand, spec);

  DatasetManifest m;
  m.seed = seed;
  m.spec = spec;
  m.entries.reserve(totals.grand);
  for (const auto& s : sources) {
    const auto factor = replication_factor(s.plan);
    for (std::uint64_t i = 0; i < s.source.image_count; ++i) {
      for (std::uint64_t v = 0; v < factor; ++v) {
        m.entries.push_back({image_ref(s.source.name, i, v), s.source.label, s.source.name, Split::train});
      }
    }
  }

  rng::Engine eng(seed);
  rng::shuffle(std::span(m.entries), eng);
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    if (i < counts.train) {
      m.entries[i].split = Split::train;
    } else if (i < counts.train + counts.val) {
      m.entries[i].split = Split::val;
    } else {
      m.entries[i].split = Split::test;
    }
  }
  return m;
}

}  // namespace tlselect
