#include "sememe/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sememe/common/error.hpp"
#include "sememe/common/seed.hpp"
#include "sememe/data/sgns.hpp"
#include "sememe/nd/adam.hpp"

namespace sememe::model {

eval::LabelSet to_label_set(std::span<const int> ids, const data::Vocab& labels) {
  eval::LabelSet out;
  for (int id : ids) out.insert(labels.token(id));
  return out;
}

std::vector<eval::LabelSet> gold_sets(std::span<const data::Example> examples, const data::Vocab& labels) {
  std::vector<eval::LabelSet> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(to_label_set(ex.labels, labels));
  return out;
}

std::vector<eval::LabelSet> predict_sets(const Network& network, std::span<const data::Example> examples,
                                         const data::Vocab& labels) {
  std::vector<eval::LabelSet> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(to_label_set(network.predict_labels(ex.descriptions), labels));
  return out;
}

namespace {

bool has_description(const data::Example& ex) {
  return std::any_of(ex.descriptions.begin(), ex.descriptions.end(), [](const auto& d) { return !d.empty(); });
}

std::string batch_dump(std::span<const data::Example* const> batch, const Network& net) {
  std::string out;
  for (const auto* ex : batch) {
    nd::Tape tape(false);
    double value = std::nan("");
    try {
      value = net.example_loss(tape, *ex).item();
    } catch (const std::exception&) {
    }
    out += fmt::format("\n  word '{}' labels={} loss={}", ex->word, ex->labels.size(), value);
  }
  return out;
}

}  // namespace

TrainResult train_model(const Architecture& arch, std::span<const data::Example> train,
                        std::span<const data::Example> dev, const data::Vocab& labels,
                        const EpochCallback& on_epoch) {
  const HyperParams& hp = arch.hyper;
  hp.validate();
  nd::Rng init_rng(derive_seed(hp.seed, "init"));
  TrainResult result{Network(arch, init_rng), 0, 0.0, {}, 0};
  Network& net = result.network;

  std::vector<const data::Example*> usable;
  for (const auto& ex : train) {
    if (has_description(ex)) {
      usable.push_back(&ex);
    } else {
      ++result.skipped_examples;
    }
  }
  if (result.skipped_examples != 0) {
    spdlog::info("{} training examples have no description for the selected resources; skipped",
                 result.skipped_examples);
  }
  if (usable.empty()) throw DataError("no training example has a description");

  if (is_seq2seq(arch.kind) && hp.pretrain_labels) {
    data::SgnsConfig sgns;
    sgns.dim = hp.label_dim;
    sgns.epochs = hp.sgns_epochs;
    sgns.seed = derive_seed(hp.seed, "sgns");
    const Tensor table = data::pretrain_label_embeddings(train, arch.label_vocab, sgns);
    auto dst = net.params().get("label_emb").values_mut();
    std::copy(table.values().begin(), table.values().end(), dst.begin());
  }

  if (hp.epochs == 0) {
    spdlog::warn("epochs=0: returning the initial parameters");
    return result;
  }

  nd::AdamConfig adam_cfg;
  adam_cfg.learning_rate = hp.learning_rate;
  nd::AdamState adam(adam_cfg);
  nd::Rng shuffle_rng(derive_seed(hp.seed, "shuffle"));
  const auto dev_golds = gold_sets(dev, labels);

  // A batch may leave some parameters untouched (e.g. a resource that is
  // empty throughout); they still take a zero-gradient step.
  net.params().zero_grad();
  std::optional<nd::ParamSet> best;
  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    std::shuffle(usable.begin(), usable.end(), shuffle_rng);
    double loss_sum = 0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < usable.size(); start += hp.batch_size) {
      const std::size_t n = std::min(hp.batch_size, usable.size() - start);
      const std::span<const data::Example* const> batch(usable.data() + start, n);
      nd::Tape tape;
      const Tensor loss = net.batch_loss(tape, batch);
      if (!std::isfinite(loss.item())) {
        throw NumericError(
            fmt::format("non-finite loss at epoch {}, batch {}:{}", epoch, batches + 1, batch_dump(batch, net)));
      }
      tape.backward(loss);
      nd::adam_step(net.params(), adam);
      loss_sum += loss.item();
      ++batches;
    }
    if (!net.params().all_finite()) {
      throw NumericError(fmt::format("parameters became non-finite during epoch {}", epoch));
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    if (!dev.empty()) rec.dev_f1 = eval::micro_prf(predict_sets(net, dev, labels), dev_golds).f1;
    const bool improved = !best || (dev.empty() ? true : rec.dev_f1 > result.best_dev_f1);
    if (improved) {
      best = net.params().clone();
      result.best_epoch = epoch;
      result.best_dev_f1 = rec.dev_f1;
    }
    rec.best = improved;
    spdlog::info("{} epoch {}/{}: loss {:.4f} dev F1 {:.4f}{}", model_kind_name(arch.kind), epoch, hp.epochs,
                 rec.train_loss, rec.dev_f1, improved ? " *" : "");
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  if (dev.empty()) spdlog::warn("empty dev set: keeping the last epoch");
  net.params().assign_values(*best);
  return result;
}

}  // namespace sememe::model
