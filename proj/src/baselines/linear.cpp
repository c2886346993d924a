#include "sememe/baselines/linear.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sememe/common/error.hpp"
#include "sememe/nd/adam.hpp"
#include "sememe/nd/tape.hpp"

namespace sememe::baselines {

namespace {

void check_inputs(const std::vector<SparseVector>& features, const std::vector<std::vector<int>>& labels,
                  std::size_t num_features) {
  if (features.empty()) throw UsageError("baseline needs a nonempty training set");
  if (features.size() != labels.size()) throw UsageError("features and labels differ in length");
  if (num_features == 0) throw UsageError("empty feature space");
  for (const auto& x : features) {
    for (const auto& [f, v] : x) {
      if (f >= num_features) throw UsageError(fmt::format("feature {} outside a space of {}", f, num_features));
    }
  }
}

std::shared_ptr<const nd::Bags> to_bags(const std::vector<SparseVector>& features) {
  auto bags = std::make_shared<nd::Bags>();
  bags->reserve(features.size());
  for (const auto& x : features) {
    std::vector<nd::BagItem> bag;
    bag.reserve(x.size());
    for (const auto& [f, v] : x) bag.push_back({f, v});
    bags->push_back(std::move(bag));
  }
  return bags;
}

// x W + b for one example, summed in the same order as embedding_bag.
std::vector<Real> affine(const SparseVector& x, const Tensor& w, const Tensor& b) {
  const std::size_t cols = w.dim(1);
  const auto wv = w.values();
  std::vector<Real> out(cols, 0.0);
  for (const auto& [f, v] : x) {
    if (f >= w.dim(0)) continue;
    for (std::size_t c = 0; c < cols; ++c) out[c] += v * wv[f * cols + c];
  }
  const auto bv = b.values();
  for (std::size_t c = 0; c < cols; ++c) out[c] += bv[c];
  return out;
}

Real sigmoid(Real z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

std::vector<bool> labels_without_positives(const std::vector<std::vector<int>>& labels, std::size_t num_labels) {
  std::vector<bool> seen(num_labels, false);
  for (const auto& set : labels) {
    for (int l : set) {
      if (l < 0 || static_cast<std::size_t>(l) >= num_labels) throw UsageError(fmt::format("label {} out of range", l));
      seen[static_cast<std::size_t>(l)] = true;
    }
  }
  std::vector<bool> never(num_labels);
  std::size_t count = 0;
  for (std::size_t l = 0; l < num_labels; ++l) {
    never[l] = !seen[l];
    count += never[l] ? 1 : 0;
  }
  if (count != 0) spdlog::warn("{} labels have no positive training example and are never predicted", count);
  return never;
}

std::vector<Real> dense_targets(const std::vector<std::vector<int>>& labels, std::size_t num_labels) {
  std::vector<Real> y(labels.size() * num_labels, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (int l : labels[i]) y[i * num_labels + static_cast<std::size_t>(l)] = 1.0;
  return y;
}

// Mean over examples of the summed per-label binary cross entropy.
Tensor bce(nd::Tape& tape, const Tensor& logits, const Tensor& targets) {
  const std::size_t n = logits.dim(0);
  std::vector<Real> ones(targets.size(), 1.0);
  const Tensor negatives = tape.sub(Tensor::from(targets.shape(), std::move(ones)), targets);
  const Tensor log_p = tape.log(tape.sigmoid(logits), 1e-12);
  const Tensor log_q = tape.log(tape.sigmoid(tape.scale(logits, -1.0)), 1e-12);
  const Tensor total = tape.add(tape.sum(tape.mul(log_p, targets)), tape.sum(tape.mul(log_q, negatives)));
  return tape.scale(total, -1.0 / static_cast<Real>(n));
}

template <typename LossFn>
void optimize(nd::ParamSet& params, const LogisticConfig& config, LossFn loss_fn) {
  nd::AdamConfig cfg;
  cfg.learning_rate = config.learning_rate;
  nd::AdamState state(cfg);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    nd::Tape tape;
    const Tensor loss = loss_fn(tape);
    if (!std::isfinite(loss.item())) throw NumericError(fmt::format("baseline loss is non-finite at epoch {}", epoch));
    tape.backward(loss);
    nd::adam_step(params, state);
  }
}

}  // namespace

BinaryRelevance BinaryRelevance::fit(const std::vector<SparseVector>& features,
                                     const std::vector<std::vector<int>>& labels, std::size_t num_features,
                                     std::size_t num_labels, const LogisticConfig& config) {
  check_inputs(features, labels, num_features);
  BinaryRelevance br;
  br.never_ = labels_without_positives(labels, num_labels);
  nd::ParamSet params;
  br.weights_ = params.add("w", Tensor::zeros({num_features, num_labels}));
  br.bias_ = params.add("b", Tensor::zeros({1, num_labels}));
  const auto bags = to_bags(features);
  const Tensor y = Tensor::from({features.size(), num_labels}, dense_targets(labels, num_labels));
  optimize(params, config, [&](nd::Tape& tape) {
    return bce(tape, tape.add(tape.embedding_bag(br.weights_, bags), br.bias_), y);
  });
  return br;
}

BinaryRelevance BinaryRelevance::from_weights(Tensor weights, Tensor bias) {
  BinaryRelevance br;
  br.never_.assign(weights.dim(1), false);
  br.weights_ = std::move(weights);
  br.bias_ = std::move(bias);
  return br;
}

std::vector<Real> BinaryRelevance::scores(const SparseVector& x) const { return affine(x, weights_, bias_); }

std::vector<int> BinaryRelevance::predict(const SparseVector& x) const {
  const auto z = scores(x);
  std::vector<int> out;
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (!never_[l] && sigmoid(z[l]) > 0.5) out.push_back(static_cast<int>(l));
  }
  return out;
}

LabelPowerset LabelPowerset::fit(const std::vector<SparseVector>& features,
                                 const std::vector<std::vector<int>>& labels, std::size_t num_features,
                                 const LogisticConfig& config) {
  check_inputs(features, labels, num_features);
  LabelPowerset lp;
  std::map<std::vector<int>, std::size_t> class_of;
  std::vector<std::size_t> target(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto set = labels[i];
    std::sort(set.begin(), set.end());
    auto [it, inserted] = class_of.emplace(set, lp.classes_.size());
    if (inserted) lp.classes_.push_back(set);
    target[i] = it->second;
  }
  const std::size_t C = lp.classes_.size();
  nd::ParamSet params;
  lp.weights_ = params.add("w", Tensor::zeros({num_features, C}));
  lp.bias_ = params.add("b", Tensor::zeros({1, C}));
  if (C == 1) return lp;  // a single class needs no training

  const auto bags = to_bags(features);
  std::vector<Real> onehot(labels.size() * C, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) onehot[i * C + target[i]] = 1.0;
  const Tensor y = Tensor::from({labels.size(), C}, std::move(onehot));
  const Real scale = -1.0 / static_cast<Real>(labels.size());
  optimize(params, config, [&](nd::Tape& tape) {
    const Tensor probs = tape.softmax(tape.add(tape.embedding_bag(lp.weights_, bags), lp.bias_));
    return tape.scale(tape.sum(tape.mul(tape.log(probs, 1e-12), y)), scale);
  });
  return lp;
}

std::vector<int> LabelPowerset::predict(const SparseVector& x) const {
  const auto z = affine(x, weights_, bias_);
  const std::size_t best = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
  return classes_[best];
}

namespace {

std::vector<std::size_t> chain_positions(const std::vector<int>& order, std::size_t num_labels) {
  if (order.size() != num_labels) {
    throw UsageError(fmt::format("chain order has {} entries for {} labels", order.size(), num_labels));
  }
  std::vector<std::size_t> pos(num_labels, num_labels);
  for (std::size_t j = 0; j < order.size(); ++j) {
    const int l = order[j];
    if (l < 0 || static_cast<std::size_t>(l) >= num_labels || pos[static_cast<std::size_t>(l)] != num_labels) {
      throw UsageError("chain order is not a permutation of the labels");
    }
    pos[static_cast<std::size_t>(l)] = j;
  }
  return pos;
}

}  // namespace

ClassifierChain ClassifierChain::fit(const std::vector<SparseVector>& features,
                                     const std::vector<std::vector<int>>& labels, std::size_t num_features,
                                     std::size_t num_labels, std::vector<int> order, const LogisticConfig& config) {
  check_inputs(features, labels, num_features);
  const auto pos = chain_positions(order, num_labels);
  ClassifierChain cc;
  cc.order_ = std::move(order);
  cc.never_ = labels_without_positives(labels, num_labels);
  nd::ParamSet params;
  cc.weights_ = params.add("w", Tensor::zeros({num_features, num_labels}));
  cc.bias_ = params.add("b", Tensor::zeros({1, num_labels}));
  cc.chain_ = params.add("chain", Tensor::zeros({num_labels, num_labels}));

  std::vector<Real> mask(num_labels * num_labels, 0.0);
  for (std::size_t i = 0; i < num_labels; ++i)
    for (std::size_t j = 0; j < num_labels; ++j) mask[i * num_labels + j] = pos[i] < pos[j] ? 1.0 : 0.0;
  const Tensor chain_mask = Tensor::from({num_labels, num_labels}, std::move(mask));
  const auto bags = to_bags(features);
  const Tensor y = Tensor::from({features.size(), num_labels}, dense_targets(labels, num_labels));
  optimize(params, config, [&](nd::Tape& tape) {
    const Tensor from_features = tape.add(tape.embedding_bag(cc.weights_, bags), cc.bias_);
    const Tensor from_chain = tape.matmul(y, tape.mul(cc.chain_, chain_mask));
    return bce(tape, tape.add(from_features, from_chain), y);
  });
  // Keep only the entries that prediction may use.
  auto cv = cc.chain_.values_mut();
  const auto mv = chain_mask.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] *= mv[i];
  return cc;
}

ClassifierChain ClassifierChain::from_weights(Tensor weights, Tensor bias, Tensor chain, std::vector<int> order) {
  const std::size_t L = weights.dim(1);
  chain_positions(order, L);
  if (chain.shape() != nd::Shape{L, L}) throw ShapeError("chain weights must be [num_labels, num_labels]");
  ClassifierChain cc;
  cc.never_.assign(L, false);
  cc.weights_ = std::move(weights);
  cc.bias_ = std::move(bias);
  cc.chain_ = std::move(chain);
  cc.order_ = std::move(order);
  return cc;
}

std::vector<int> ClassifierChain::predict(const SparseVector& x) const {
  const auto base = affine(x, weights_, bias_);
  const std::size_t L = base.size();
  const auto cv = chain_.values();
  std::vector<Real> value(L, 0.0);
  std::vector<int> out;
  for (std::size_t j = 0; j < order_.size(); ++j) {
    const auto l = static_cast<std::size_t>(order_[j]);
    Real z = base[l];
    for (std::size_t i = 0; i < j; ++i) {
      const auto prev = static_cast<std::size_t>(order_[i]);
      z += value[prev] * cv[prev * L + l];
    }
    if (!never_[l] && sigmoid(z) > 0.5) {
      value[l] = 1.0;
      out.push_back(static_cast<int>(l));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> frequency_order(const std::vector<std::vector<int>>& labels, std::size_t num_labels) {
  std::vector<std::size_t> count(num_labels, 0);
  for (const auto& set : labels)
    for (int l : set) ++count[static_cast<std::size_t>(l)];
  std::vector<int> order(num_labels);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return count[static_cast<std::size_t>(a)] > count[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace sememe::baselines
