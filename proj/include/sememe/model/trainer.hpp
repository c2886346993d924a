#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sememe/data/corpus.hpp"
#include "sememe/eval/metrics.hpp"
#include "sememe/model/network.hpp"

namespace sememe::model {

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0;  // mean batch loss
  double dev_f1 = 0;
  bool best = false;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

struct TrainResult {
  Network network;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  double best_dev_f1 = 0;
  std::vector<EpochRecord> history;
  std::size_t skipped_examples = 0;  // training examples with no description
};

/// Mini-batch Adam training with dev-F1 model selection.
///
/// The parameters returned are those of the epoch with the highest dev
/// micro-F1 (earliest on ties). Labels are pretrained with SGNS first when
/// the model decodes and `hyper.pretrain_labels` is set. A non-finite batch
/// loss aborts with NumericError naming the batch's words.
TrainResult train_model(const Architecture& arch, std::span<const data::Example> train,
                        std::span<const data::Example> dev, const data::Vocab& labels,
                        const EpochCallback& on_epoch = {});

// Label-id sequences rendered as sets of label tokens.
eval::LabelSet to_label_set(std::span<const int> ids, const data::Vocab& labels);
std::vector<eval::LabelSet> gold_sets(std::span<const data::Example> examples, const data::Vocab& labels);
std::vector<eval::LabelSet> predict_sets(const Network& network, std::span<const data::Example> examples,
                                         const data::Vocab& labels);

}  // namespace sememe::model
