#pragma once

// Brute-force ML-KNN written straight from the counting formulas, used to
// check the library implementation on tiny corpora.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "sememe/baselines/features.hpp"

namespace sememe::testing {

struct TinyCorpus {
  std::vector<baselines::SparseVector> features;
  std::vector<std::vector<int>> labels;
  std::size_t num_labels = 0;
};

// Indices ordered by decreasing similarity, ties by lower index.
inline std::vector<std::size_t> ranked(const TinyCorpus& c, const baselines::SparseVector& q, std::size_t skip) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < c.features.size(); ++i)
    if (i != skip) idx.push_back(i);
  std::vector<double> sim(c.features.size());
  for (auto i : idx) sim[i] = baselines::cosine_similarity(q, c.features[i]);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });
  return idx;
}

inline bool has(const std::vector<int>& set, int l) { return std::find(set.begin(), set.end(), l) != set.end(); }

// `s` is an integer smoothing constant so every quantity is an exact
// rational and the decision is made on integers.
inline std::vector<int> brute_force_mlknn(const TinyCorpus& c, const baselines::SparseVector& query, std::size_t k,
                                          long long s) {
  const std::size_t n = c.features.size();
  std::vector<int> out;
  for (std::size_t l = 0; l < c.num_labels; ++l) {
    const int label = static_cast<int>(l);
    long long positives = 0;
    for (const auto& set : c.labels) positives += has(set, label) ? 1 : 0;
    const long long negatives = static_cast<long long>(n) - positives;

    std::vector<long long> with(k + 1, 0), without(k + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto nb = ranked(c, c.features[i], i);
      nb.resize(std::min(k, nb.size()));
      std::size_t delta = 0;
      for (auto j : nb) delta += has(c.labels[j], label) ? 1 : 0;
      (has(c.labels[i], label) ? with : without)[delta] += 1;
    }
    const long long sum_with = std::accumulate(with.begin(), with.end(), 0LL);
    const long long sum_without = std::accumulate(without.begin(), without.end(), 0LL);

    auto nb = ranked(c, query, n);
    nb.resize(std::min(k, nb.size()));
    std::size_t count = 0;
    for (auto j : nb) count += has(c.labels[j], label) ? 1 : 0;
    // P(H1) = (s + positives) / (2s + n), P(H0) = (s + negatives) / (2s + n)
    // P(E|H1) = (s + with[count]) / (s(k+1) + sum_with), likewise for H0.
    const long long slots = s * static_cast<long long>(k + 1);
    const long long yes = (s + positives) * (s + with[count]) * (slots + sum_without);
    const long long no = (s + negatives) * (s + without[count]) * (slots + sum_with);
    if (yes > no) out.push_back(label);
  }
  return out;
}

// Nonzero integer count vectors over `dims` features with random labels.
inline TinyCorpus random_tiny_corpus(std::mt19937_64& rng, std::size_t n, std::size_t dims, std::size_t num_labels) {
  TinyCorpus c;
  c.num_labels = num_labels;
  std::uniform_int_distribution<int> count(0, 2);
  std::bernoulli_distribution coin(0.45);
  for (std::size_t i = 0; i < n; ++i) {
    baselines::SparseVector v;
    for (std::size_t d = 0; d < dims; ++d) {
      const int x = count(rng);
      if (x > 0) v.emplace_back(d, x);
    }
    if (v.empty()) v.emplace_back(rng() % dims, 1.0);
    c.features.push_back(v);
    std::vector<int> set;
    for (std::size_t l = 0; l < num_labels; ++l)
      if (coin(rng)) set.push_back(static_cast<int>(l));
    if (set.empty()) set.push_back(static_cast<int>(rng() % num_labels));
    c.labels.push_back(set);
  }
  return c;
}

}  // namespace sememe::testing
