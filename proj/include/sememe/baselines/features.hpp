#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "sememe/data/corpus.hpp"

namespace sememe::baselines {

// Sorted (feature id, term frequency) pairs.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

/// Character unigram and bigram counts over every description of an
/// example. Bigrams never span two descriptions. The feature space is fixed
/// by the training examples; n-grams seen only later are dropped, as are
/// n-grams containing the UNK character.
class FeatureSpace {
 public:
  static FeatureSpace fit(std::span<const data::Example> train);

  SparseVector extract(const data::Example& example) const;
  std::vector<SparseVector> extract_all(std::span<const data::Example> examples) const;
  std::size_t size() const noexcept { return index_.size(); }

 private:
  // Unigram c is (c, -1); bigram (a, b) is (a, b).
  std::map<std::pair<int, int>, std::size_t> index_;
};

double cosine_similarity(const SparseVector& a, const SparseVector& b);

// Label ids of an example as a sorted set without reserved ids.
std::vector<int> label_ids(const data::Example& example);

}  // namespace sememe::baselines
