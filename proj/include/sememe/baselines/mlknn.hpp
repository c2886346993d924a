#pragma once

#include <cstddef>
#include <vector>

#include "sememe/baselines/features.hpp"

namespace sememe::baselines {

struct MlknnConfig {
  std::size_t k = 10;
  double smooth = 1.0;
};

/// Multi-label k-nearest neighbours.
///
/// Neighbours are ranked by cosine similarity (ties: lower training index).
/// For every label the fit stores the smoothed prior and, for j = 0..k, the
/// smoothed probability that an example with (without) the label has j
/// neighbours carrying it; training examples are counted leave-one-out, so
/// they see min(k, n - 1) neighbours. A query with j carrying neighbours gets
/// the label iff P(H1) P(E_j | H1) > P(H0) P(E_j | H0).
class Mlknn {
 public:
  // labels[i] lists label indices in [0, num_labels).
  static Mlknn fit(std::vector<SparseVector> features, std::vector<std::vector<int>> labels, std::size_t num_labels,
                   const MlknnConfig& config = {});

  std::vector<int> predict(const SparseVector& query) const;

  // Indices of the nearest training examples, skipping `exclude`.
  std::vector<std::size_t> neighbors(const SparseVector& query, std::size_t count,
                                     std::size_t exclude = static_cast<std::size_t>(-1)) const;

  double prior(std::size_t label) const { return prior_[label]; }
  // P(E_j | H_b) for b = has_label.
  double likelihood(std::size_t label, std::size_t j, bool has_label) const;

 private:
  MlknnConfig config_;
  std::size_t num_labels_ = 0;
  std::vector<SparseVector> features_;
  std::vector<std::vector<bool>> has_;  // [example][label]
  std::vector<double> prior_;
  std::vector<double> positives_;
  std::vector<std::vector<double>> count_with_;     // [label][j], raw
  std::vector<std::vector<double>> count_without_;  // [label][j], raw
  std::vector<std::vector<double>> like_with_;     // [label][j]
  std::vector<std::vector<double>> like_without_;  // [label][j]
};

}  // namespace sememe::baselines
