#include "sememe/model/hyper.hpp"

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::model {

ModelKind parse_model_kind(const std::string& text) {
  if (text == "ld-seq2seq") return ModelKind::kLdSeq2Seq;
  if (text == "basic-seq2seq") return ModelKind::kBasicSeq2Seq;
  if (text == "rnn-mllr") return ModelKind::kRnnMllr;
  throw UsageError(fmt::format("unknown model '{}' (expected ld-seq2seq, basic-seq2seq or rnn-mllr)", text));
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLdSeq2Seq: return "ld-seq2seq";
    case ModelKind::kBasicSeq2Seq: return "basic-seq2seq";
    case ModelKind::kRnnMllr: return "rnn-mllr";
  }
  return "unknown";
}

bool is_seq2seq(ModelKind kind) { return kind != ModelKind::kRnnMllr; }

HyperParams HyperParams::preset(const std::string& name) {
  HyperParams hp;
  if (name == "desk") return hp;
  if (name == "paper") {
    hp.char_dim = 200;
    hp.label_dim = 200;
    hp.hidden_dim = 300;
    hp.batch_size = 20;
    hp.epochs = 10;
    hp.learning_rate = 1e-3;
    return hp;
  }
  throw UsageError(fmt::format("unknown preset '{}' (expected paper or desk)", name));
}

HyperParams HyperParams::from_config(const KeyValueConfig& c, HyperParams hp) {
  auto size = [&](const char* key, std::size_t fallback) { return static_cast<std::size_t>(c.get_uint(key, fallback)); };
  hp.char_dim = size("model.char_dim", hp.char_dim);
  hp.label_dim = size("model.label_dim", hp.label_dim);
  hp.hidden_dim = size("model.hidden_dim", hp.hidden_dim);
  hp.max_len = size("model.max_len", hp.max_len);
  hp.batch_size = size("train.batch_size", hp.batch_size);
  hp.epochs = size("train.epochs", hp.epochs);
  hp.learning_rate = c.get_double("train.learning_rate", hp.learning_rate);
  hp.seed = c.get_uint("train.seed", hp.seed);
  if (auto mode = c.find("loss.mode")) hp.loss_mode = loss::parse_loss_mode(*mode);
  hp.feed_predictions = c.get_bool("train.feed_predictions", hp.feed_predictions);
  hp.pretrain_labels = c.get_bool("train.pretrain_labels", hp.pretrain_labels);
  hp.sgns_epochs = size("train.sgns_epochs", hp.sgns_epochs);
  return hp;
}

KeyValueConfig HyperParams::to_config() const {
  KeyValueConfig c;
  c.set("model.char_dim", std::to_string(char_dim));
  c.set("model.label_dim", std::to_string(label_dim));
  c.set("model.hidden_dim", std::to_string(hidden_dim));
  c.set("model.max_len", std::to_string(max_len));
  c.set("train.batch_size", std::to_string(batch_size));
  c.set("train.epochs", std::to_string(epochs));
  c.set("train.learning_rate", fmt::format("{}", learning_rate));
  c.set("train.seed", std::to_string(seed));
  if (loss_mode) c.set("loss.mode", loss::loss_mode_name(*loss_mode));
  c.set("train.feed_predictions", feed_predictions ? "true" : "false");
  c.set("train.pretrain_labels", pretrain_labels ? "true" : "false");
  c.set("train.sgns_epochs", std::to_string(sgns_epochs));
  return c;
}

void HyperParams::validate() const {
  auto positive = [](const char* what, std::size_t v) {
    if (v == 0) throw UsageError(fmt::format("{} must be positive", what));
  };
  positive("model.char_dim", char_dim);
  positive("model.label_dim", label_dim);
  positive("model.hidden_dim", hidden_dim);
  positive("model.max_len", max_len);
  positive("train.batch_size", batch_size);
  if (!(learning_rate > 0)) throw UsageError("train.learning_rate must be positive");
  if (pretrain_labels && label_dim < 2) throw UsageError("model.label_dim must be >= 2 for label pretraining");
}

loss::LossMode HyperParams::resolved_loss(ModelKind kind) const {
  if (loss_mode) return *loss_mode;
  return kind == ModelKind::kBasicSeq2Seq ? loss::LossMode::kHard : loss::LossMode::kSoft;
}

}  // namespace sememe::model
