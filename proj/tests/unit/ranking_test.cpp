#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tlselect/fixtures.hpp"
#include "tlselect/ranking.hpp"

using namespace tlselect;

namespace {

std::vector<oracle::Row> rows_of(const std::vector<RunRecord>& runs) {
  std::vector<oracle::Row> out;
  for (const auto& r : runs) {
    const auto& m = r.metrics;
    out.push_back({m.overfitting, m.val_accuracy, m.val_loss, m.sensitivity, m.specificity});
  }
  return out;
}

RunRecord make(std::string name, MetricSet m, std::optional<std::uint64_t> params = std::nullopt) {
  return {std::move(name), m, params};
}

}  // namespace

TEST(MetricRanks, Table2ValidationAccuracyColumn) {
  const std::vector<double> acc{0.8098, 0.8544, 0.8011, 0.8817, 0.9015, 0.8219, 0.8528, 0.8133, 0.7595};
  const std::vector<double> expected{7, 3, 8, 2, 1, 5, 4, 6, 9};
  EXPECT_EQ(metric_ranks(acc), expected);
  EXPECT_EQ(oracle::ordinal_ranks(acc), expected);
}

TEST(MetricRanks, SingleValue) {
  EXPECT_EQ(metric_ranks(std::vector<double>{0.3}), std::vector<double>{1});
}

TEST(MetricRanks, TiePolicies) {
  const std::vector<double> v{5, 3, 3, 1};
  EXPECT_EQ(metric_ranks(v, TiePolicy::ordinal), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(metric_ranks(v, TiePolicy::average), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(metric_ranks(v, TiePolicy::competition), (std::vector<double>{1, 2, 2, 4}));
}

TEST(MetricRanks, MatchesCountingOracleWithHeavyTies) {
  const std::vector<double> v{2, 7, 2, 2, 9, 7, 0, 2, 9, 1};
  EXPECT_EQ(metric_ranks(v, TiePolicy::ordinal), oracle::ordinal_ranks(v));
  EXPECT_EQ(metric_ranks(v, TiePolicy::average), oracle::average_ranks(v));
  EXPECT_EQ(metric_ranks(v, TiePolicy::competition), oracle::competition_ranks(v));
}

TEST(MetricRanks, RejectsNonFinite) {
  const std::vector<double> v{0.1, NAN, 0.3};
  try {
    metric_ranks(v);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
  }
  EXPECT_THROW(metric_ranks(std::vector<double>{}), ValidationError);
}

TEST(OverallScore, Examples) {
  // Adam/MSE and RMS/CCE rank vectors, taken from independently sorted columns.
  EXPECT_DOUBLE_EQ(overall_score({7, 1, 9, 2, 4}, 9).total, 62.0);
  EXPECT_DOUBLE_EQ(overall_score({1, 7, 1, 1, 9}, 9).total, 19.75);
  EXPECT_DOUBLE_EQ(overall_score({1, 1, 1, 1, 1}, 1).total, 7.75);
}

TEST(OverallScore, BreakdownTerms) {
  const auto s = overall_score({7, 1, 9, 2, 4}, 9);
  EXPECT_DOUBLE_EQ(s.overfit_term, 21.0);
  EXPECT_DOUBLE_EQ(s.accuracy_term, 18.0);
  EXPECT_DOUBLE_EQ(s.loss_term, 13.5);
  EXPECT_DOUBLE_EQ(s.sensitivity_term, 8.0);
  EXPECT_DOUBLE_EQ(s.specificity_term, 1.5);
  EXPECT_EQ(s.stage_size, 9u);
  EXPECT_EQ(s.weights, Weights{});
}

TEST(OverallScore, RankOutOfRange) {
  EXPECT_THROW(overall_score({0, 1, 1, 1, 1}, 3), ValidationError);
  EXPECT_THROW(overall_score({1, 1, 4, 1, 1}, 3), ValidationError);
}

TEST(OverallScore, CustomWeights) {
  const Weights w{1, 0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(overall_score({3, 1, 1, 1, 1}, 5, w).total, 3.0);
  EXPECT_THROW(parse_weights("1,2,3"), ParseError);
  EXPECT_THROW(parse_weights("1,2,3,4,-1"), ValidationError);
  EXPECT_EQ(parse_weights("3,2,1.5,1,0.25"), Weights{});
}

TEST(RankStage, Table2) {
  const auto runs = fixtures::table2();
  const auto r = rank_stage(runs);
  EXPECT_EQ(r.final_ranks_in_input_order(), (std::vector<std::size_t>{9, 3, 7, 4, 1, 2, 5, 8, 6}));
  EXPECT_EQ(r.winner(), "Adam, MSE");
  EXPECT_EQ(r.final_ranks_in_input_order(), oracle::final_ranks(oracle::totals(rows_of(runs))));
}

TEST(RankStage, Table1) {
  const auto runs = fixtures::table1();
  const auto r = rank_stage(runs);
  const std::vector<std::size_t> expected(std::begin(fixtures::kTable1Ranks), std::end(fixtures::kTable1Ranks));
  EXPECT_EQ(r.final_ranks_in_input_order(), expected);
  EXPECT_EQ(r.winner(), "Xception");
  EXPECT_EQ(r.final_ranks_in_input_order(), oracle::final_ranks(oracle::totals(rows_of(runs))));
  EXPECT_DOUBLE_EQ(r.find("Xception").score.total, 98.25);
}

TEST(RankStage, ScoreTieBrokenByParameterCount) {
  const MetricSet m{0.05, 0.8, 0.3, 0.7, 0.6};
  std::vector<RunRecord> runs{make("big", m, 2'000'000), make("small", m, 1'000'000)};
  const auto r = rank_stage(runs, TiePolicy::average);
  EXPECT_EQ(r.standings[0].score.total, r.standings[1].score.total);
  EXPECT_EQ(r.winner(), "small");
  EXPECT_EQ(r.find("big").final_rank, 2u);
}

TEST(RankStage, ScoreTieWithoutParameterCountFails) {
  const MetricSet m{0.05, 0.8, 0.3, 0.7, 0.6};
  std::vector<RunRecord> runs{make("a", m, 10), make("b", m)};
  EXPECT_THROW(rank_stage(runs, TiePolicy::average), ValidationError);
}

TEST(RankStage, MissingParamsAllowedWithoutTies) {
  std::vector<RunRecord> runs{make("a", {0.1, 0.9, 0.2, 0.9, 0.9}), make("b", {0.2, 0.5, 0.9, 0.5, 0.5})};
  EXPECT_EQ(rank_stage(runs).winner(), "a");
}

TEST(RankStage, Errors) {
  const MetricSet m{0.05, 0.8, 0.3, 0.7, 0.6};
  std::vector<RunRecord> dup{make("a", m, 1), make("a", m, 2)};
  EXPECT_THROW(rank_stage(dup), ValidationError);
  EXPECT_THROW(rank_stage(std::vector<RunRecord>{}), ValidationError);
  std::vector<RunRecord> bad{make("a", {0.05, 1.3, 0.3, 0.7, 0.6})};
  EXPECT_THROW(rank_stage(bad), ValidationError);
}

TEST(RankStage, SingleCandidate) {
  std::vector<RunRecord> runs{make("only", {0.1, 0.7, 0.4, 0.6, 0.8})};
  const auto r = rank_stage(runs);
  EXPECT_EQ(r.winner(), "only");
  EXPECT_EQ(r.standings[0].final_rank, 1u);
  EXPECT_DOUBLE_EQ(r.standings[0].score.total, 7.75);
}

TEST(RankStage, Table1SensitivityTieOrderDoesNotMatter) {
  auto runs = fixtures::table1();
  // ResNet50V2 (index 2) and ResNet101 (index 3) share sensitivity 0.9355.
  ASSERT_EQ(runs[2].metrics.sensitivity, runs[3].metrics.sensitivity);
  const auto a = rank_stage(runs).final_ranks_in_input_order();
  std::swap(runs[2], runs[3]);
  auto b = rank_stage(runs).final_ranks_in_input_order();
  std::swap(b[2], b[3]);
  EXPECT_EQ(a, b);
}

TEST(RankStage, Table1CompetitionPolicyIgnoresTieOrder) {
  auto runs = fixtures::table1();
  const std::vector<std::size_t> expected(std::begin(fixtures::kTable1Ranks), std::end(fixtures::kTable1Ranks));
  EXPECT_EQ(rank_stage(runs, TiePolicy::competition).final_ranks_in_input_order(), expected);
  std::swap(runs[2], runs[3]);
  auto swapped = rank_stage(runs, TiePolicy::competition).final_ranks_in_input_order();
  std::swap(swapped[2], swapped[3]);
  EXPECT_EQ(swapped, expected);
}

TEST(RankStage, Table1SwappedTieTotals) {
  // With the tie flipped, Resnet50V2 drops below InceptionResNetV2 (53.5 vs 54.25).
  auto runs = fixtures::table1();
  std::swap(runs[2], runs[3]);
  const auto r = rank_stage(runs);
  EXPECT_DOUBLE_EQ(r.find("Resnet50V2").score.total, 53.5);
  EXPECT_DOUBLE_EQ(r.find("InceptionResNetV2").score.total, 54.25);
}
