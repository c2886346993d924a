#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sememe/baselines/suite.hpp"
#include "sememe/data/corpus.hpp"
#include "sememe/data/split.hpp"
#include "sememe/data/synth.hpp"
#include "sememe/eval/compare.hpp"
#include "sememe/model/hyper.hpp"

namespace sememe::app {

// A generated corpus after splitting and encoding against the train vocab.
struct PreparedCorpus {
  data::Partition<data::Record> records;
  data::Vocabs vocabs;
  std::vector<data::Example> train;
  std::vector<data::Example> dev;
  std::vector<data::Example> test;
  data::Lexicon lexicon;
};

PreparedCorpus prepare_synthetic(const data::SynthConfig& config);

struct BenchmarkOptions {
  data::SynthConfig synth;
  model::HyperParams hyper;
  baselines::BaselineConfig baseline;
  bool classical = true;
  std::vector<model::ModelKind> neural = {model::ModelKind::kRnnMllr, model::ModelKind::kBasicSeq2Seq,
                                          model::ModelKind::kLdSeq2Seq};
  // Adds one single-resource ld-seq2seq per resource plus the MultiRes row.
  bool resource_ablation = true;
  bool oracle = false;
  std::string config_hash;
};

/// Generates the corpus for `synth.seed`, trains or fits every requested
/// model on its training split and scores all of them on the test split.
eval::ComparisonReport run_benchmark(const BenchmarkOptions& options);

}  // namespace sememe::app
