#pragma once

#include <span>

#include "sememe/data/corpus.hpp"
#include "sememe/model/trainer.hpp"

namespace sememe::baselines {

// Multi-resource encoder plus a zero-initialized linear head with one
// sigmoid per label, trained on binary cross entropy with dev-F1 epoch
// selection. `arch.kind` is forced to rnn-mllr.
model::TrainResult train_rnn_mllr(model::Architecture arch, std::span<const data::Example> train,
                                  std::span<const data::Example> dev, const data::Vocab& labels,
                                  const model::EpochCallback& on_epoch = {});

}  // namespace sememe::baselines
