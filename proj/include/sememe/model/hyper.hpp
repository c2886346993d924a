#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "sememe/common/kv_config.hpp"
#include "sememe/loss/sequence_loss.hpp"

namespace sememe::model {

enum class ModelKind { kLdSeq2Seq, kBasicSeq2Seq, kRnnMllr };

ModelKind parse_model_kind(const std::string& text);
std::string model_kind_name(ModelKind kind);
bool is_seq2seq(ModelKind kind);

/// Sizes and training knobs shared by the neural models.
///
/// Config keys: model.char_dim, model.label_dim, model.hidden_dim,
/// train.batch_size, train.epochs, model.max_len, train.learning_rate,
/// train.seed, loss.mode, train.feed_predictions, train.pretrain_labels,
/// train.sgns_epochs.
struct HyperParams {
  std::size_t char_dim = 32;
  std::size_t label_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t batch_size = 16;
  std::size_t epochs = 15;
  std::size_t max_len = 8;
  double learning_rate = 3e-3;
  std::uint64_t seed = 7;
  // Unset means soft for ld-seq2seq and hard for basic-seq2seq.
  std::optional<loss::LossMode> loss_mode;
  // Feed the previous argmax instead of the gold label while training.
  bool feed_predictions = false;
  bool pretrain_labels = true;
  std::size_t sgns_epochs = 5;

  // "paper": 200/200/300, batch 20, 10 epochs. "desk": 32/32/64, batch 16,
  // 15 epochs.
  static HyperParams preset(const std::string& name);
  static HyperParams from_config(const KeyValueConfig& config, HyperParams base);
  KeyValueConfig to_config() const;
  void validate() const;

  loss::LossMode resolved_loss(ModelKind kind) const;
};

}  // namespace sememe::model
