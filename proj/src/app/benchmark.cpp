#include "sememe/app/benchmark.hpp"

#include <spdlog/spdlog.h>

#include "sememe/model/trainer.hpp"

namespace sememe::app {

PreparedCorpus prepare_synthetic(const data::SynthConfig& config) {
  auto synth = data::generate_synthetic(config);
  PreparedCorpus out;
  out.records = data::split_corpus(synth.records, config.seed);
  out.lexicon = std::move(synth.lexicon);
  out.vocabs = data::build_vocabs(out.records.train);
  out.train = data::encode_all(out.records.train, out.vocabs);
  out.dev = data::encode_all(out.records.dev, out.vocabs);
  out.test = data::encode_all(out.records.test, out.vocabs);
  return out;
}

namespace {

std::vector<eval::LabelSet> record_golds(const std::vector<data::Record>& records) {
  std::vector<eval::LabelSet> out;
  for (const auto& r : records) out.emplace_back(r.labels.begin(), r.labels.end());
  return out;
}

}  // namespace

eval::ComparisonReport run_benchmark(const BenchmarkOptions& options) {
  const PreparedCorpus corpus = prepare_synthetic(options.synth);
  const auto golds = record_golds(corpus.records.test);
  const std::size_t R = options.synth.resource_count;
  std::vector<eval::ModelEntry> entries;

  if (options.classical) {
    for (const char* name : baselines::kClassicalNames) {
      entries.push_back({name, eval::Section::kModels, [&, name] {
                           spdlog::info("fitting {}", name);
                           const auto predictor = baselines::fit_classical(name, corpus.train, corpus.vocabs.labels,
                                                                           options.baseline);
                           std::vector<eval::LabelSet> out;
                           for (const auto& ex : corpus.test) out.push_back(predictor(ex));
                           return out;
                         }});
    }
  }

  std::vector<eval::LabelSet> multi_res;
  for (auto kind : options.neural) {
    const bool keep = kind == model::ModelKind::kLdSeq2Seq && options.resource_ablation;
    entries.push_back({model::model_kind_name(kind), eval::Section::kModels, [&, kind, keep] {
                         model::Architecture arch{kind, corpus.vocabs.chars.size(), corpus.vocabs.labels.size(), R,
                                                  options.hyper};
                         const auto trained = model::train_model(arch, corpus.train, corpus.dev, corpus.vocabs.labels);
                         auto preds = model::predict_sets(trained.network, corpus.test, corpus.vocabs.labels);
                         if (keep) multi_res = preds;
                         return preds;
                       }});
  }

  if (options.resource_ablation && R > 1) {
    for (std::size_t r = 0; r < R; ++r) {
      entries.push_back({fmt::format("SingleRes-r{}", r + 1), eval::Section::kResources, [&, r] {
                           const std::size_t which[] = {r};
                           const auto train = data::select_resources(corpus.train, which);
                           const auto dev = data::select_resources(corpus.dev, which);
                           const auto test = data::select_resources(corpus.test, which);
                           model::Architecture arch{model::ModelKind::kLdSeq2Seq, corpus.vocabs.chars.size(),
                                                    corpus.vocabs.labels.size(), 1, options.hyper};
                           const auto trained = model::train_model(arch, train, dev, corpus.vocabs.labels);
                           return model::predict_sets(trained.network, test, corpus.vocabs.labels);
                         }});
    }
    entries.push_back({"MultiRes", eval::Section::kResources, [&] {
                         if (multi_res.empty()) {
                           model::Architecture arch{model::ModelKind::kLdSeq2Seq, corpus.vocabs.chars.size(),
                                                    corpus.vocabs.labels.size(), R, options.hyper};
                           const auto trained =
                               model::train_model(arch, corpus.train, corpus.dev, corpus.vocabs.labels);
                           multi_res = model::predict_sets(trained.network, corpus.test, corpus.vocabs.labels);
                         }
                         return multi_res;
                       }});
  }

  if (options.oracle) {
    entries.push_back({"oracle", eval::Section::kModels, [&] {
                         const data::SpanOracle oracle(corpus.lexicon);
                         std::vector<eval::LabelSet> out;
                         for (const auto& r : corpus.records.test) {
                           const auto labels = oracle.decode(r);
                           out.emplace_back(labels.begin(), labels.end());
                         }
                         return out;
                       }});
  }

  eval::ReportContext ctx;
  ctx.split = "test";
  ctx.seed = options.synth.seed;
  ctx.config_hash = options.config_hash;
  return eval::compare(entries, golds, ctx);
}

}  // namespace sememe::app
