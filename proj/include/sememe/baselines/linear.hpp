#pragma once

#include <cstddef>
#include <vector>

#include "sememe/baselines/features.hpp"
#include "sememe/nd/tensor.hpp"

namespace sememe::baselines {

using nd::Real;
using nd::Tensor;

// Full-batch Adam on zero-initialized weights.
struct LogisticConfig {
  std::size_t epochs = 200;
  double learning_rate = 0.01;
};

/// One logistic regression per label, trained jointly as one weight matrix
/// (the per-label problems share no parameters). A label with no positive
/// training example is never predicted.
class BinaryRelevance {
 public:
  static BinaryRelevance fit(const std::vector<SparseVector>& features, const std::vector<std::vector<int>>& labels,
                             std::size_t num_features, std::size_t num_labels, const LogisticConfig& config = {});
  // weights [num_features, num_labels], bias [1, num_labels]
  static BinaryRelevance from_weights(Tensor weights, Tensor bias);

  std::vector<Real> scores(const SparseVector& x) const;  // pre-sigmoid
  std::vector<int> predict(const SparseVector& x) const;
  const Tensor& weights() const noexcept { return weights_; }
  const Tensor& bias() const noexcept { return bias_; }

 private:
  Tensor weights_;
  Tensor bias_;
  std::vector<bool> never_;
};

/// Softmax regression over the label sets seen in training.
class LabelPowerset {
 public:
  static LabelPowerset fit(const std::vector<SparseVector>& features, const std::vector<std::vector<int>>& labels,
                           std::size_t num_features, const LogisticConfig& config = {});

  std::vector<int> predict(const SparseVector& x) const;
  // Distinct training label sets (sorted), in order of first appearance.
  const std::vector<std::vector<int>>& classes() const noexcept { return classes_; }

 private:
  std::vector<std::vector<int>> classes_;
  Tensor weights_;
  Tensor bias_;
};

/// Logistic regressions linked in `order`: the classifier of order[j] also
/// reads the 0/1 values of order[0..j-1] through chain weights. Training
/// feeds gold values, prediction feeds earlier predictions.
class ClassifierChain {
 public:
  static ClassifierChain fit(const std::vector<SparseVector>& features, const std::vector<std::vector<int>>& labels,
                             std::size_t num_features, std::size_t num_labels, std::vector<int> order,
                             const LogisticConfig& config = {});
  // chain [num_labels, num_labels]: entry (i, j) is the weight of label i's
  // value in label j's classifier; only entries with i before j are used.
  static ClassifierChain from_weights(Tensor weights, Tensor bias, Tensor chain, std::vector<int> order);

  std::vector<int> predict(const SparseVector& x) const;
  const std::vector<int>& order() const noexcept { return order_; }

 private:
  Tensor weights_;
  Tensor bias_;
  Tensor chain_;
  std::vector<int> order_;
  std::vector<bool> never_;
};

// Labels by descending training frequency, ties by lower index.
std::vector<int> frequency_order(const std::vector<std::vector<int>>& labels, std::size_t num_labels);

}  // namespace sememe::baselines
