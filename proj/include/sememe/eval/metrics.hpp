#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>

namespace sememe::eval {

// Predictions and golds are compared as sets; sequence order is ignored.
using LabelSet = std::set<std::string>;

struct MetricReport {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t examples = 0;
  std::size_t exact_matches = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double accuracy = 0;
};

// Counts pooled over every example and label. Empty denominators give 0.
MetricReport micro_prf(std::span<const LabelSet> predictions, std::span<const LabelSet> golds);

// Fraction of examples whose predicted set equals the gold set.
double exact_match_accuracy(std::span<const LabelSet> predictions, std::span<const LabelSet> golds);

}  // namespace sememe::eval
