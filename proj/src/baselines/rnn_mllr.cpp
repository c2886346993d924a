#include "sememe/baselines/rnn_mllr.hpp"

namespace sememe::baselines {

model::TrainResult train_rnn_mllr(model::Architecture arch, std::span<const data::Example> train,
                                  std::span<const data::Example> dev, const data::Vocab& labels,
                                  const model::EpochCallback& on_epoch) {
  arch.kind = model::ModelKind::kRnnMllr;
  return model::train_model(arch, train, dev, labels, on_epoch);
}

}  // namespace sememe::baselines
