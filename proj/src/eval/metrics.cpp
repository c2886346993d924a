#include "sememe/eval/metrics.hpp"

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::eval {

namespace {

void check_lengths(std::size_t predictions, std::size_t golds) {
  if (predictions != golds) {
    throw UsageError(fmt::format("{} predictions for {} gold label sets", predictions, golds));
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricReport micro_prf(std::span<const LabelSet> predictions, std::span<const LabelSet> golds) {
  check_lengths(predictions.size(), golds.size());
  MetricReport r;
  r.examples = golds.size();
  for (std::size_t i = 0; i < golds.size(); ++i) {
    std::size_t hits = 0;
    for (const auto& label : predictions[i]) hits += golds[i].count(label);
    r.true_positives += hits;
    r.false_positives += predictions[i].size() - hits;
    r.false_negatives += golds[i].size() - hits;
    if (predictions[i] == golds[i]) ++r.exact_matches;
  }
  r.precision = ratio(r.true_positives, r.true_positives + r.false_positives);
  r.recall = ratio(r.true_positives, r.true_positives + r.false_negatives);
  // 2PR/(P+R) written over integer counts: 2TP / (2TP + FP + FN).
  r.f1 = ratio(2 * r.true_positives, 2 * r.true_positives + r.false_positives + r.false_negatives);
  r.accuracy = ratio(r.exact_matches, r.examples);
  return r;
}

double exact_match_accuracy(std::span<const LabelSet> predictions, std::span<const LabelSet> golds) {
  return micro_prf(predictions, golds).accuracy;
}

}  // namespace sememe::eval
