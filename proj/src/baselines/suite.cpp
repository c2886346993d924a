#include "sememe/baselines/suite.hpp"

#include <memory>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::baselines {

namespace {

constexpr int kOffset = data::Vocab::kReserved;

std::vector<std::vector<int>> label_indices(std::span<const data::Example> examples) {
  std::vector<std::vector<int>> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    auto ids = label_ids(ex);
    for (auto& id : ids) id -= kOffset;
    out.push_back(std::move(ids));
  }
  return out;
}

eval::LabelSet to_set(const std::vector<int>& indices, const data::Vocab& labels) {
  eval::LabelSet out;
  for (int i : indices) out.insert(labels.token(i + kOffset));
  return out;
}

}  // namespace

BaselineConfig BaselineConfig::from_config(const KeyValueConfig& c) {
  BaselineConfig cfg;
  cfg.mlknn.k = static_cast<std::size_t>(c.get_uint("baseline.k", cfg.mlknn.k));
  cfg.mlknn.smooth = c.get_double("baseline.smooth", cfg.mlknn.smooth);
  cfg.logistic.epochs = static_cast<std::size_t>(c.get_uint("baseline.epochs", cfg.logistic.epochs));
  cfg.logistic.learning_rate = c.get_double("baseline.learning_rate", cfg.logistic.learning_rate);
  if (auto order = c.find("baseline.order"); order && !trim(*order).empty()) {
    for (const auto& token : split(*order, ',')) cfg.order.push_back(trim(token));
  }
  return cfg;
}

Predictor fit_classical(const std::string& name, std::span<const data::Example> train, const data::Vocab& labels,
                        const BaselineConfig& config) {
  if (train.empty()) throw UsageError("baselines need a nonempty training set");
  const auto space = std::make_shared<FeatureSpace>(FeatureSpace::fit(train));
  const auto x = space->extract_all(train);
  const auto y = label_indices(train);
  const std::size_t num_labels = labels.size() - kOffset;

  if (name == "mlknn") {
    auto cfg = config.mlknn;
    cfg.k = std::min(cfg.k, x.size());
    auto m = std::make_shared<Mlknn>(Mlknn::fit(x, y, num_labels, cfg));
    return [=, &labels](const data::Example& ex) { return to_set(m->predict(space->extract(ex)), labels); };
  }
  if (name == "br") {
    auto m = std::make_shared<BinaryRelevance>(BinaryRelevance::fit(x, y, space->size(), num_labels, config.logistic));
    return [=, &labels](const data::Example& ex) { return to_set(m->predict(space->extract(ex)), labels); };
  }
  if (name == "lp") {
    auto m = std::make_shared<LabelPowerset>(LabelPowerset::fit(x, y, space->size(), config.logistic));
    return [=, &labels](const data::Example& ex) { return to_set(m->predict(space->extract(ex)), labels); };
  }
  if (name == "cc") {
    std::vector<int> order;
    if (config.order.empty()) {
      order = frequency_order(y, num_labels);
    } else {
      for (const auto& token : config.order) {
        const auto id = labels.find(token);
        if (!id || *id < kOffset) throw UsageError(fmt::format("baseline.order names unknown label '{}'", token));
        order.push_back(*id - kOffset);
      }
    }
    auto m = std::make_shared<ClassifierChain>(
        ClassifierChain::fit(x, y, space->size(), num_labels, std::move(order), config.logistic));
    return [=, &labels](const data::Example& ex) { return to_set(m->predict(space->extract(ex)), labels); };
  }
  throw UsageError(fmt::format("unknown baseline '{}' (expected mlknn, lp, br or cc)", name));
}

}  // namespace sememe::baselines
