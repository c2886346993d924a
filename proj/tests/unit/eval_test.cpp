#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "prf_cases.hpp"
#include "sememe/common/error.hpp"
#include "sememe/eval/compare.hpp"
#include "sememe/eval/metrics.hpp"

namespace sememe::eval {
namespace {

TEST(MicroPrf, HandcountedCases) {
  const auto cases = testing::handcrafted_prf_cases();
  ASSERT_EQ(cases.size(), 20u);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto m = micro_prf(c.predictions, c.golds);
    SCOPED_TRACE(i);
    EXPECT_EQ(m.true_positives, c.tp);
    EXPECT_EQ(m.false_positives, c.fp);
    EXPECT_EQ(m.false_negatives, c.fn);
    EXPECT_EQ(m.exact_matches, c.exact);
    EXPECT_EQ(m.examples, c.golds.size());
    EXPECT_EQ(m.precision, c.precision);
    EXPECT_EQ(m.recall, c.recall);
    EXPECT_EQ(m.f1, c.f1);
    EXPECT_EQ(m.accuracy, c.accuracy);
  }
}

TEST(MicroPrf, PartialSetIsNotAnExactMatch) {
  const std::vector<LabelSet> gold = {{"a", "b"}};
  const std::vector<LabelSet> pred = {{"a"}};
  EXPECT_EQ(exact_match_accuracy(pred, gold), 0.0);
  const std::vector<LabelSet> golds = {{"a"}, {"b"}, {"c"}, {"d"}};
  const std::vector<LabelSet> preds = {{"a"}, {"c"}, {}, {"d", "e"}};
  EXPECT_EQ(exact_match_accuracy(preds, golds), 0.25);
}

TEST(MicroPrf, LengthMismatchIsAnError) {
  const std::vector<LabelSet> gold = {{"a"}, {"b"}};
  const std::vector<LabelSet> pred = {{"a"}};
  EXPECT_THROW(micro_prf(pred, gold), Error);
  EXPECT_THROW(exact_match_accuracy(pred, gold), Error);
}

std::vector<LabelSet> random_sets(std::mt19937_64& rng, std::size_t n, bool nonempty) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f"};
  std::vector<LabelSet> out(n);
  for (auto& s : out) {
    for (const char* name : names)
      if (rng() % 3 == 0) s.insert(name);
    if (nonempty && s.empty()) s.insert(names[rng() % 6]);
  }
  return out;
}

TEST(MicroPrf, PermutationInvariantAndBounded) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    auto golds = random_sets(rng, n, true);
    auto preds = random_sets(rng, n, false);
    const auto m = micro_prf(preds, golds);
    for (double v : {m.precision, m.recall, m.f1, m.accuracy}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(m.f1, std::max(m.precision, m.recall));
    if (m.accuracy == 1.0) {
      EXPECT_EQ(m.f1, 1.0);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<LabelSet> pg, pp;
    for (auto i : order) {
      pg.push_back(golds[i]);
      pp.push_back(preds[i]);
    }
    const auto p = micro_prf(pp, pg);
    EXPECT_EQ(p.true_positives, m.true_positives);
    EXPECT_EQ(p.f1, m.f1);
    EXPECT_EQ(p.accuracy, m.accuracy);
  }
}

std::vector<ModelEntry> sample_models(const std::vector<LabelSet>& golds) {
  return {
      {"ld-seq2seq", Section::kModels, [golds] { return golds; }},
      {"MultiRes", Section::kResources, [golds] { return golds; }},
      {"SingleRes-r1", Section::kResources, [] { return std::vector<LabelSet>{{"a"}, {}}; }},
      {"broken", Section::kModels, []() -> std::vector<LabelSet> { throw DataError("boom"); }},
      {"short", Section::kModels, [] { return std::vector<LabelSet>{{"a"}}; }},
      {"mlknn", Section::kModels, [] { return std::vector<LabelSet>{{}, {}}; }},
  };
}

TEST(Compare, OrdersRowsAndKeepsFailures) {
  const std::vector<LabelSet> golds = {{"a", "b"}, {"c"}};
  const auto models = sample_models(golds);
  const auto report = compare(models, golds, {"test", 3, "abc"});
  ASSERT_EQ(report.rows.size(), 6u);
  std::vector<std::string> names;
  for (const auto& row : report.rows) names.push_back(row.model);
  EXPECT_EQ(names, (std::vector<std::string>{"mlknn", "ld-seq2seq", "broken", "short", "SingleRes-r1", "MultiRes"}));
  EXPECT_EQ(report.rows[1].metrics->f1, 1.0);
  EXPECT_FALSE(report.rows[2].metrics.has_value());
  EXPECT_NE(report.rows[2].error.find("boom"), std::string::npos);
  EXPECT_FALSE(report.rows[3].metrics.has_value());
  EXPECT_EQ(report.rows[4].section, Section::kResources);
  EXPECT_EQ(report.rows[4].metrics->true_positives, 1u);
}

TEST(Compare, ReportsAreByteIdentical) {
  const std::vector<LabelSet> golds = {{"a", "b"}, {"c"}};
  const auto models = sample_models(golds);
  const auto a = compare(models, golds, {"test", 3, "abc"});
  const auto b = compare(models, golds, {"test", 3, "abc"});
  EXPECT_EQ(format_jsonl(a), format_jsonl(b));
  EXPECT_EQ(format_table(a), format_table(b));
  const std::string jsonl = format_jsonl(a);
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 6);
  EXPECT_NE(jsonl.find("1.0000"), std::string::npos);
  EXPECT_NE(format_table(a).find(section_name(Section::kResources)), std::string::npos);
}

}  // namespace
}  // namespace sememe::eval
