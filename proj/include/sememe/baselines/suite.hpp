#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sememe/baselines/linear.hpp"
#include "sememe/baselines/mlknn.hpp"
#include "sememe/common/kv_config.hpp"
#include "sememe/data/corpus.hpp"
#include "sememe/eval/metrics.hpp"

namespace sememe::baselines {

// The classical baselines, fitted on character n-gram features.
inline constexpr const char* kClassicalNames[] = {"mlknn", "lp", "br", "cc"};

/// Config keys: baseline.k, baseline.smooth, baseline.epochs,
/// baseline.learning_rate, baseline.order (comma-separated label tokens;
/// default is descending training frequency).
struct BaselineConfig {
  MlknnConfig mlknn;
  LogisticConfig logistic;
  std::vector<std::string> order;

  static BaselineConfig from_config(const KeyValueConfig& config);
};

using Predictor = std::function<eval::LabelSet(const data::Example&)>;

// Fits the named baseline on `train`. `labels` maps the examples' label ids
// and must outlive the returned predictor.
Predictor fit_classical(const std::string& name, std::span<const data::Example> train, const data::Vocab& labels,
                        const BaselineConfig& config = {});

}  // namespace sememe::baselines
