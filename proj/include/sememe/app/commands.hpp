#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sememe/app/run_config.hpp"

namespace sememe::app {

// Every command returns a process exit code and reports failures by
// throwing the error types of sememe/common/error.hpp.

struct GenerateOptions {
  std::filesystem::path out_dir = "data";
};
// Writes train.jsonl, dev.jsonl, test.jsonl and lexicon.json.
int cmd_generate(const RunConfig& config, const GenerateOptions& options, std::ostream& out);

struct TrainOptions {
  std::filesystem::path train;
  std::filesystem::path dev;
  std::filesystem::path checkpoint;
  std::optional<std::filesystem::path> log;  // default: <checkpoint>.log.jsonl
  std::string model = "ld-seq2seq";
  std::optional<std::string> resources;  // 1-based list; default all
};
int cmd_train(const RunConfig& config, const TrainOptions& options, std::ostream& out);

struct EvalOptions {
  std::filesystem::path test;
  std::vector<std::filesystem::path> checkpoints;
  std::vector<std::string> baselines;
  std::optional<std::filesystem::path> train;  // required by baselines
  bool oracle = false;
  std::optional<std::filesystem::path> lexicon;  // default: lexicon.json next to the test file
  std::vector<std::string> resources;            // each entry adds rows restricted to that list
  std::filesystem::path report = "report.jsonl";
};
int cmd_eval(const RunConfig& config, const EvalOptions& options, std::ostream& out);

struct PredictOptions {
  std::filesystem::path checkpoint;
  std::vector<std::string> descriptions;  // one per resource; "" for an absent one
};
int cmd_predict(const RunConfig& config, const PredictOptions& options, std::ostream& out);

struct GradcheckOptions {
  double tolerance = 1e-4;
  double epsilon = 1e-5;
  std::size_t trials = 5;
};
// Exit code 0 when every check is under tolerance, 3 otherwise.
int cmd_gradcheck(const RunConfig& config, const GradcheckOptions& options, std::ostream& out);

struct BenchmarkCommandOptions {
  std::filesystem::path report = "benchmark.jsonl";
  bool oracle = false;
  bool ablation = true;
};
// Generates, trains and compares every model for the configured seed.
int cmd_benchmark(const RunConfig& config, const BenchmarkCommandOptions& options, std::ostream& out);

}  // namespace sememe::app
