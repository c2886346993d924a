#include "sememe/model/model_io.hpp"

#include <fmt/format.h>

#include "json.hpp"
#include "sememe/common/error.hpp"
#include "sememe/loss/sequence_loss.hpp"
#include "sememe/nd/checkpoint.hpp"

namespace sememe::model {

void save_model(const std::filesystem::path& path, const Network& network, const data::Vocabs& vocabs,
                const nd::Metadata& extra) {
  const auto& arch = network.architecture();
  nd::Metadata meta;
  meta.emplace_back("model", model_kind_name(arch.kind));
  meta.emplace_back("resources", std::to_string(arch.resources));
  meta.emplace_back("loss", loss::loss_mode_name(arch.hyper.resolved_loss(arch.kind)));
  meta.emplace_back("log_floor", fmt::format("{}", loss::kLogFloor));
  const auto hyper = arch.hyper.to_config();
  for (const auto& [key, value] : hyper.entries()) meta.emplace_back("hyper." + key, value);
  meta.emplace_back("chars", nlohmann::json(vocabs.chars.tokens()).dump());
  meta.emplace_back("labels", nlohmann::json(vocabs.labels.tokens()).dump());
  meta.insert(meta.end(), extra.begin(), extra.end());
  nd::save_checkpoint(path, network.params(), meta);
}

SavedModel load_model(const std::filesystem::path& path) {
  const auto ckpt = nd::load_checkpoint(path);
  auto need = [&](const std::string& key) {
    const auto v = ckpt.meta_value(key);
    if (v.empty()) throw DataError(fmt::format("checkpoint '{}' lacks '{}'", path.string(), key));
    return v;
  };
  KeyValueConfig hyper_cfg;
  for (const auto& [key, value] : ckpt.meta) {
    if (key.rfind("hyper.", 0) == 0) hyper_cfg.set(key.substr(6), value);
  }
  data::Vocabs vocabs;
  try {
    vocabs.chars = data::Vocab::from_tokens(nlohmann::json::parse(need("chars")).get<std::vector<std::string>>());
    vocabs.labels = data::Vocab::from_tokens(nlohmann::json::parse(need("labels")).get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("checkpoint '{}' has malformed vocab metadata: {}", path.string(), e.what()));
  }
  Architecture arch;
  arch.kind = parse_model_kind(need("model"));
  arch.resources = std::stoul(need("resources"));
  arch.char_vocab = vocabs.chars.size();
  arch.label_vocab = vocabs.labels.size();
  arch.hyper = HyperParams::from_config(hyper_cfg, HyperParams{});
  return {Network(arch, ckpt.params), std::move(vocabs), ckpt.meta};
}

}  // namespace sememe::model
