#include "sememe/app/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "sememe/app/benchmark.hpp"
#include "sememe/app/gradcheck_suite.hpp"
#include "sememe/baselines/suite.hpp"
#include "sememe/common/error.hpp"
#include "sememe/data/split.hpp"
#include "sememe/data/synth.hpp"
#include "sememe/eval/compare.hpp"
#include "sememe/model/model_io.hpp"
#include "sememe/model/trainer.hpp"

namespace sememe::app {

namespace {

namespace fs = std::filesystem;

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  }
}

std::vector<std::size_t> all_resources(std::size_t count) {
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = i;
  return out;
}

std::string resource_row_name(const std::vector<std::size_t>& which, std::size_t total) {
  if (which.size() == 1 && total > 1) return fmt::format("SingleRes-r{}", which[0] + 1);
  if (which.size() == total) return "MultiRes";
  return "Res-r" + format_resource_list(which);
}

std::vector<eval::LabelSet> record_golds(const std::vector<data::Record>& records) {
  std::vector<eval::LabelSet> out;
  for (const auto& r : records) out.emplace_back(r.labels.begin(), r.labels.end());
  return out;
}

std::size_t record_resources(const std::vector<data::Record>& records) {
  return records.empty() ? 0 : records.front().descriptions.size();
}

}  // namespace

int cmd_generate(const RunConfig& config, const GenerateOptions& options, std::ostream& out) {
  const auto synth_cfg = config.synth();
  const auto synth = data::generate_synthetic(synth_cfg);
  const auto parts = data::split_corpus(synth.records, synth_cfg.seed);
  ensure_directory(options.out_dir);
  data::write_records(options.out_dir / "train.jsonl", parts.train);
  data::write_records(options.out_dir / "dev.jsonl", parts.dev);
  data::write_records(options.out_dir / "test.jsonl", parts.test);
  data::write_lexicon(options.out_dir / "lexicon.json", synth.lexicon);

  std::size_t label_total = 0;
  std::vector<std::size_t> present(synth_cfg.resource_count, 0);
  std::vector<std::size_t> chars(synth_cfg.resource_count, 0);
  for (const auto& r : synth.records) {
    label_total += r.labels.size();
    for (std::size_t i = 0; i < r.descriptions.size(); ++i) {
      if (!r.descriptions[i].empty()) ++present[i];
      chars[i] += r.descriptions[i].size();
    }
  }
  const double n = static_cast<double>(synth.records.size());
  out << fmt::format("examples: {} (train {}, dev {}, test {})\n", synth.records.size(), parts.train.size(),
                     parts.dev.size(), parts.test.size());
  out << fmt::format("labels: {} distinct, {:.2f} per example\n", synth_cfg.num_labels,
                     static_cast<double>(label_total) / n);
  for (std::size_t i = 0; i < synth_cfg.resource_count; ++i) {
    out << fmt::format("resource {}: reveals {} labels, present in {:.1f}% of examples, {:.1f} chars on average\n",
                       i + 1, synth.lexicon.revealed[i].size(), 100.0 * static_cast<double>(present[i]) / n,
                       static_cast<double>(chars[i]) / n);
  }
  out << fmt::format("written to {}\n", options.out_dir.string());
  return static_cast<int>(ExitCode::kOk);
}

int cmd_train(const RunConfig& config, const TrainOptions& options, std::ostream& out) {
  if (std::find(std::begin(baselines::kClassicalNames), std::end(baselines::kClassicalNames), options.model) !=
      std::end(baselines::kClassicalNames)) {
    throw UsageError(fmt::format("'{}' has no trainable checkpoint; fit it with `eval --baseline {} --train <file>`",
                                 options.model, options.model));
  }
  const auto kind = model::parse_model_kind(options.model);
  const auto hyper = config.hyper();

  auto corpus = data::load_corpus(options.train);
  if (corpus.examples.empty()) throw DataError(fmt::format("training file '{}' is empty", options.train.string()));
  auto dev = data::load_examples(options.dev, corpus.vocabs);
  const std::size_t total = data::resource_count(corpus.examples);
  auto which = options.resources ? parse_resource_list(*options.resources) : all_resources(total);
  auto train = data::select_resources(corpus.examples, which);
  dev = data::select_resources(dev, which);

  const model::Architecture arch{kind, corpus.vocabs.chars.size(), corpus.vocabs.labels.size(), which.size(), hyper};
  const fs::path log_path = options.log ? *options.log : fs::path(options.checkpoint.string() + ".log.jsonl");
  std::ofstream log(log_path, std::ios::app);
  if (!log) throw DataError(fmt::format("cannot open training log '{}'", log_path.string()));

  const auto result = model::train_model(arch, train, dev, corpus.vocabs.labels, [&](const model::EpochRecord& rec) {
    nlohmann::ordered_json line;
    line["model"] = model::model_kind_name(kind);
    line["seed"] = hyper.seed;
    line["epoch"] = rec.epoch;
    line["loss"] = rec.train_loss;
    line["dev_f1"] = rec.dev_f1;
    line["best"] = rec.best;
    log << line.dump() << "\n" << std::flush;
  });

  nd::Metadata extra;
  extra.emplace_back("input_resources", format_resource_list(which));
  extra.emplace_back("corpus_resources", std::to_string(total));
  extra.emplace_back("best_epoch", std::to_string(result.best_epoch));
  extra.emplace_back("config_hash", config.hash());
  model::save_model(options.checkpoint, result.network, corpus.vocabs, extra);
  out << fmt::format("{}: best epoch {} (dev F1 {:.4f}); checkpoint {}\n", model::model_kind_name(kind),
                     result.best_epoch, result.best_dev_f1, options.checkpoint.string());
  return static_cast<int>(ExitCode::kOk);
}

int cmd_eval(const RunConfig& config, const EvalOptions& options, std::ostream& out) {
  const auto test_records = data::read_records(options.test);
  if (test_records.empty()) throw DataError(fmt::format("test file '{}' is empty", options.test.string()));
  const std::size_t total = record_resources(test_records);
  const auto golds = record_golds(test_records);
  std::vector<eval::ModelEntry> entries;

  std::vector<std::vector<std::size_t>> restrictions;
  for (const auto& spec : options.resources) {
    auto which = parse_resource_list(spec);
    for (auto r : which) {
      if (r >= total) throw UsageError(fmt::format("resource {} requested but the corpus has {}", r + 1, total));
    }
    restrictions.push_back(std::move(which));
  }

  for (const auto& path : options.checkpoints) {
    auto saved = std::make_shared<model::SavedModel>(model::load_model(path));
    const auto kind = model::model_kind_name(saved->network.architecture().kind);
    std::vector<std::size_t> inputs = all_resources(total);
    for (const auto& [k, v] : saved->meta) {
      if (k == "input_resources") inputs = parse_resource_list(v);
    }
    if (inputs.size() != saved->network.architecture().resources) {
      throw DataError(fmt::format("checkpoint '{}' has inconsistent resource metadata", path.string()));
    }
    for (auto r : inputs) {
      if (r >= total) throw DataError(fmt::format("checkpoint '{}' reads resource {} but the test corpus has {}",
                                                  path.string(), r + 1, total));
    }
    const std::string suffix = options.checkpoints.size() > 1 ? fmt::format(" ({})", kind) : "";

    // Feeds the model its input resources, blanking those outside `keep`.
    auto make_entry = [&, saved, inputs](std::string name, eval::Section section, std::vector<std::size_t> keep) {
      entries.push_back({std::move(name), section, [&, saved, inputs, keep] {
                           auto examples = data::encode_all(test_records, saved->vocabs);
                           examples = data::select_resources(examples, inputs);
                           for (auto& ex : examples) {
                             for (std::size_t i = 0; i < inputs.size(); ++i) {
                               if (std::find(keep.begin(), keep.end(), inputs[i]) == keep.end()) {
                                 ex.descriptions[i].clear();
                               }
                             }
                           }
                           return model::predict_sets(saved->network, examples, saved->vocabs.labels);
                         }});
    };
    if (inputs.size() == total) {
      make_entry(kind + suffix, eval::Section::kModels, inputs);
    } else {
      make_entry(resource_row_name(inputs, total) + suffix, eval::Section::kResources, inputs);
    }
    for (const auto& which : restrictions) {
      for (auto r : which) {
        if (std::find(inputs.begin(), inputs.end(), r) == inputs.end()) {
          throw UsageError(fmt::format("checkpoint '{}' was not trained on resource {}", path.string(), r + 1));
        }
      }
      make_entry(resource_row_name(which, total) + suffix, eval::Section::kResources, which);
    }
  }

  if (!options.baselines.empty()) {
    if (!options.train) throw UsageError("--baseline needs --train to fit on");
    const auto train_records = std::make_shared<std::vector<data::Record>>(data::read_records(*options.train));
    const auto vocabs = std::make_shared<data::Vocabs>(data::build_vocabs(*train_records));
    const auto baseline_cfg = config.baseline();
    for (const auto& name : options.baselines) {
      entries.push_back({name, eval::Section::kModels, [&, name, train_records, vocabs, baseline_cfg] {
                           const auto train = data::encode_all(*train_records, *vocabs);
                           const auto predictor = baselines::fit_classical(name, train, vocabs->labels, baseline_cfg);
                           std::vector<eval::LabelSet> preds;
                           for (const auto& r : test_records) preds.push_back(predictor(data::encode(r, *vocabs)));
                           return preds;
                         }});
    }
  }

  if (options.oracle) {
    const fs::path lexicon_path = options.lexicon ? *options.lexicon : options.test.parent_path() / "lexicon.json";
    const auto oracle = std::make_shared<data::SpanOracle>(data::read_lexicon(lexicon_path));
    entries.push_back({"oracle", eval::Section::kModels, [&, oracle] {
                         std::vector<eval::LabelSet> preds;
                         for (const auto& r : test_records) {
                           const auto labels = oracle->decode(r);
                           preds.emplace_back(labels.begin(), labels.end());
                         }
                         return preds;
                       }});
  }
  if (entries.empty()) throw UsageError("nothing to evaluate: pass --checkpoint, --baseline or --oracle");

  eval::ReportContext ctx;
  ctx.split = "test";
  ctx.seed = config.seed();
  ctx.config_hash = config.hash();
  const auto report = eval::compare(entries, golds, ctx);
  eval::write_report(options.report, report);
  out << eval::format_table(report);
  const bool failed = std::any_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return !r.metrics; });
  return static_cast<int>(failed ? ExitCode::kData : ExitCode::kOk);
}

int cmd_predict(const RunConfig&, const PredictOptions& options, std::ostream& out) {
  const auto saved = model::load_model(options.checkpoint);
  const std::size_t R = saved.network.architecture().resources;
  if (options.descriptions.size() != R) {
    throw UsageError(fmt::format("this model reads {} description(s), got {}", R, options.descriptions.size()));
  }
  data::Record record;
  record.word = "input";
  record.descriptions = options.descriptions;
  const auto ex = data::encode(record, saved.vocabs);
  if (std::all_of(ex.descriptions.begin(), ex.descriptions.end(), [](const auto& d) { return d.empty(); })) {
    throw DataError("every description is empty");
  }
  const auto ids = saved.network.predict_labels(ex.descriptions);
  std::string line;
  for (std::size_t i = 0; i < ids.size(); ++i) line += (i ? " " : "") + saved.vocabs.labels.token(ids[i]);
  out << line << "\n";
  return static_cast<int>(ExitCode::kOk);
}

int cmd_gradcheck(const RunConfig& config, const GradcheckOptions& options, std::ostream& out) {
  GradCheckSuiteOptions suite;
  suite.tolerance = options.tolerance;
  suite.epsilon = options.epsilon;
  suite.seed = config.seed();
  suite.trials_per_op = options.trials;
  const auto results = run_gradcheck_suite(suite);
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    out << fmt::format("{} {:<40} max_rel_error={:.3e} coords={}\n", r.passed ? "PASS" : "FAIL", r.name,
                       r.result.max_rel_error, r.result.coords_checked);
  }
  out << fmt::format("{} of {} checks under tolerance {:g}\n", results.size() - failed, results.size(),
                     options.tolerance);
  return static_cast<int>(failed == 0 ? ExitCode::kOk : ExitCode::kNumeric);
}

int cmd_benchmark(const RunConfig& config, const BenchmarkCommandOptions& options, std::ostream& out) {
  BenchmarkOptions bench;
  bench.synth = config.synth();
  bench.hyper = config.hyper();
  bench.baseline = config.baseline();
  bench.oracle = options.oracle;
  bench.resource_ablation = options.ablation;
  bench.config_hash = config.hash();
  const auto report = run_benchmark(bench);
  eval::write_report(options.report, report);
  out << eval::format_table(report);
  const bool failed = std::any_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return !r.metrics; });
  return static_cast<int>(failed ? ExitCode::kData : ExitCode::kOk);
}

}  // namespace sememe::app
