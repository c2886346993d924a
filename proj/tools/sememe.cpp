// Command line front end: generate, train, eval, predict, gradcheck,
// benchmark.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sememe/app/commands.hpp"
#include "sememe/common/error.hpp"

namespace {

using sememe::app::RunConfig;

struct Common {
  std::optional<std::string> config_file;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string log_level = "info";
};

// Splits `--key=value` arguments that CLI11 did not recognize into
// overrides; anything else is a usage error.
std::vector<std::string> collect_overrides(const std::vector<std::string>& extras) {
  std::vector<std::string> out;
  for (const auto& e : extras) {
    if (e.rfind("--", 0) != 0 || e.find('=') == std::string::npos) {
      throw sememe::UsageError("unexpected argument '" + e + "' (overrides are written --key=value)");
    }
    out.push_back(e.substr(2));
  }
  return out;
}

RunConfig make_config(const Common& common, const CLI::App& sub) {
  auto overrides = common.overrides;
  const auto extra = collect_overrides(sub.remaining());
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  if (!common.preset.empty()) overrides.insert(overrides.begin(), "preset=" + common.preset);
  if (common.seed) overrides.push_back("seed=" + std::to_string(*common.seed));
  std::optional<std::filesystem::path> file;
  if (common.config_file) file = *common.config_file;
  return RunConfig::load(file, overrides, sememe::app::read_env(sememe::app::kSeedEnv));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predict weakly ordered label sets from textual descriptions."};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_file, "key=value config file");
  app.add_option("--preset", common.preset, "hyperparameter preset: paper or desk");
  app.add_option("--seed", common.seed, "root seed (SEMEME_SEED overrides)");
  app.add_option("--set", common.overrides, "extra key=value override (repeatable)");
  app.add_option("--log-level", common.log_level, "trace, debug, info, warn, error or off");

  sememe::app::GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic corpus split into train/dev/test");
  generate->add_option("--out", gen.out_dir, "output directory");
  generate->allow_extras();

  sememe::app::TrainOptions train;
  std::optional<std::string> train_model;
  auto* train_cmd = app.add_subcommand("train", "train a neural model and keep the best dev epoch");
  train_cmd->add_option("--train", train.train, "training corpus")->required();
  train_cmd->add_option("--dev", train.dev, "dev corpus")->required();
  train_cmd->add_option("--out", train.checkpoint, "checkpoint path")->required();
  train_cmd->add_option("--log", train.log, "append-only JSONL training log");
  train_cmd->add_option("--model", train_model, "ld-seq2seq, basic-seq2seq or rnn-mllr");
  train_cmd->add_option("--resources", train.resources, "1-based resources to read, e.g. 1 or 1,2");
  train_cmd->allow_extras();

  sememe::app::EvalOptions ev;
  std::optional<std::string> lexicon;
  std::optional<std::string> eval_train;
  auto* eval_cmd = app.add_subcommand("eval", "score checkpoints, baselines and the span oracle on a test file");
  eval_cmd->add_option("--test", ev.test, "test corpus")->required();
  eval_cmd->add_option("--checkpoint", ev.checkpoints, "model checkpoint (repeatable)");
  eval_cmd->add_option("--baseline", ev.baselines, "mlknn, lp, br or cc (repeatable)");
  eval_cmd->add_option("--train", eval_train, "training corpus for baselines");
  eval_cmd->add_flag("--oracle", ev.oracle, "add the span-reading oracle row");
  eval_cmd->add_option("--lexicon", lexicon, "lexicon for --oracle (default: next to the test file)");
  eval_cmd->add_option("--resources", ev.resources, "restrict checkpoints to these resources (repeatable)");
  eval_cmd->add_option("--report", ev.report, "JSONL report path; the table goes to <report>.txt");
  eval_cmd->allow_extras();

  sememe::app::PredictOptions pred;
  auto* predict = app.add_subcommand("predict", "print the labels predicted for one word");
  predict->add_option("--checkpoint", pred.checkpoint, "model checkpoint")->required();
  predict->add_option("descriptions", pred.descriptions, "one description per resource")->required();
  predict->allow_extras();

  sememe::app::GradcheckOptions gc;
  auto* gradcheck = app.add_subcommand("gradcheck", "compare analytic and finite-difference gradients");
  gradcheck->add_option("--tolerance", gc.tolerance, "maximum relative error");
  gradcheck->add_option("--epsilon", gc.epsilon, "finite-difference step in [1e-7, 1e-4]");
  gradcheck->add_option("--trials", gc.trials, "random inputs per primitive");
  gradcheck->allow_extras();

  sememe::app::BenchmarkCommandOptions bench;
  auto* benchmark = app.add_subcommand("benchmark", "generate, train and compare every model for one seed");
  benchmark->add_option("--report", bench.report, "JSONL report path");
  benchmark->add_flag("--oracle", bench.oracle, "add the span-reading oracle row");
  benchmark->add_flag("!--no-ablation", bench.ablation, "skip the single-resource models");
  benchmark->allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(sememe::ExitCode::kUsage);
  }

  try {
    spdlog::set_default_logger(spdlog::stderr_color_mt("sememe"));
    spdlog::set_level(spdlog::level::from_str(common.log_level));
    if (generate->parsed()) return sememe::app::cmd_generate(make_config(common, *generate), gen, std::cout);
    if (train_cmd->parsed()) {
      const auto config = make_config(common, *train_cmd);
      train.model = train_model ? *train_model : config.values().get_string("model", "ld-seq2seq");
      return sememe::app::cmd_train(config, train, std::cout);
    }
    if (eval_cmd->parsed()) {
      if (lexicon) ev.lexicon = *lexicon;
      if (eval_train) ev.train = *eval_train;
      return sememe::app::cmd_eval(make_config(common, *eval_cmd), ev, std::cout);
    }
    if (predict->parsed()) return sememe::app::cmd_predict(make_config(common, *predict), pred, std::cout);
    if (gradcheck->parsed()) return sememe::app::cmd_gradcheck(make_config(common, *gradcheck), gc, std::cout);
    if (benchmark->parsed()) return sememe::app::cmd_benchmark(make_config(common, *benchmark), bench, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(sememe::exit_code_for(e));
  }
  return static_cast<int>(sememe::ExitCode::kUsage);
}
