// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "mlknn_oracle.hpp"
#include "prf_cases.hpp"
#include "sememe/app/benchmark.hpp"
#include "sememe/app/gradcheck_suite.hpp"
#include "sememe/baselines/mlknn.hpp"
#include "sememe/data/corpus.hpp"
#include "sememe/data/synth.hpp"
#include "sememe/eval/compare.hpp"
#include "sememe/eval/metrics.hpp"
#include "sememe/loss/sequence_loss.hpp"
#include "sememe/loss/soft_target.hpp"
#include "sememe/model/model_io.hpp"
#include "sememe/model/network.hpp"
#include "sememe/model/trainer.hpp"

namespace {

using namespace sememe;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome gradient_oracle() {
  const auto start = Clock::now();
  app::GradCheckSuiteOptions options;
  options.tolerance = 1e-4;
  options.epsilon = 1e-5;
  const auto entries = app::run_gradcheck_suite(options);
  double worst = 0;
  std::string worst_name;
  std::size_t failed = 0;
  for (const auto& e : entries) {
    if (!e.passed) ++failed;
    if (e.result.max_rel_error >= worst) {
      worst = e.result.max_rel_error;
      worst_name = e.name;
    }
  }
  const double elapsed = seconds_since(start);
  return {failed == 0 && elapsed < 120.0,
          fmt::format("{} checks, {} failed, worst rel err {:.2e} ({}), {:.1f} s", entries.size(), failed, worst,
                      worst_name, elapsed)};
}

Outcome soft_target_algebra() {
  std::mt19937_64 rng(11);
  std::size_t bad = 0;
  double worst_sum = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t vocab = 4 + rng() % 60;
    const std::size_t m = 1 + rng() % std::min<std::size_t>(8, vocab - 3);
    std::vector<int> ids(vocab - 3);
    std::iota(ids.begin(), ids.end(), 3);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(m);
    const loss::LabelBag bag(ids, vocab);
    const int gold = ids[rng() % m];
    std::vector<loss::Real> y(vocab, 0.0);
    y[static_cast<std::size_t>(gold)] = 1.0;
    const auto q = loss::soft_target(y, bag);
    const double sum = std::accumulate(q.begin(), q.end(), 0.0);
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    if (std::abs(sum - 1.0) > 1e-9) ++bad;
    const double half_share = 0.5 / static_cast<double>(m);
    for (std::size_t i = 0; i < vocab; ++i) {
      const bool in_bag = bag.contains(static_cast<int>(i));
      double expected = in_bag ? half_share : 0.0;
      if (static_cast<int>(i) == gold) expected += 0.5;
      if (std::abs(q[i] - expected) > 1e-15) ++bad;
    }
    if (m == 1 && q != y) ++bad;
  }
  return {bad == 0, fmt::format("1000 pairs, {} mismatches, max |sum-1| {:.1e}", bad, worst_sum)};
}

Outcome normalization_invariants() {
  std::mt19937_64 pick(3);
  double worst_att = 0, worst_prob = 0;
  std::size_t gate_bad = 0, steps = 0;
  for (int pass = 0; pass < 100; ++pass) {
    model::Architecture arch;
    arch.kind = model::ModelKind::kLdSeq2Seq;
    arch.char_vocab = 20;
    arch.label_vocab = 15;
    arch.resources = 2;
    arch.hyper.char_dim = 8;
    arch.hyper.label_dim = 8;
    arch.hyper.hidden_dim = 10;
    nd::Rng rng(static_cast<std::uint64_t>(pass) + 100);
    model::Network net(arch, rng);
    // Larger weights push the gates and softmaxes away from their centres.
    for (auto& [name, t] : net.params())
      for (auto& v : t.values_mut()) v *= 1.0 + static_cast<double>(pass % 5);
    std::vector<std::vector<int>> desc(2);
    do {
      for (auto& d : desc) {
        d.assign(pick() % 9, 0);
        for (auto& c : d) c = 3 + static_cast<int>(pick() % 17);
      }
    } while (desc[0].empty() && desc[1].empty());
    nd::Tape tape(false);
    const auto enc = net.encode(tape, desc);
    auto check_gate = [&](const nd::Tensor& g) {
      for (double v : g.values()) gate_bad += (v > 0.0 && v < 1.0) ? 0 : 1;
    };
    for (const auto& g : enc.gates) check_gate(g);
    auto state = net.initial_state(tape, enc);
    int previous = -1;
    for (std::size_t t = 0; t < arch.hyper.max_len; ++t) {
      const auto step = net.decode_step(tape, state, enc, previous);
      for (std::size_t r = 0; r < 2; ++r) {
        if (enc.resources[r].empty) continue;
        const auto a = step.attention[r].values();
        worst_att = std::max(worst_att, std::abs(std::accumulate(a.begin(), a.end(), 0.0) - 1.0));
      }
      const auto p = step.probs.values();
      worst_prob = std::max(worst_prob, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
      for (const auto& g : step.context_gates) check_gate(g);
      previous = 3 + static_cast<int>(pick() % 12);
      state = step.state;
      ++steps;
    }
  }
  return {worst_att <= 1e-9 && worst_prob <= 1e-9 && gate_bad == 0,
          fmt::format("100 passes, {} steps, max |sum alpha - 1| {:.1e}, max |sum p - 1| {:.1e}, {} gates outside (0,1)",
                      steps, worst_att, worst_prob, gate_bad)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(19);
  std::size_t queries = 0, mismatches = 0;
  for (int corpus_id = 0; corpus_id < 500; ++corpus_id) {
    const std::size_t n = 1 + rng() % 5;
    const std::size_t labels = 1 + rng() % 4;
    const auto corpus = testing::random_tiny_corpus(rng, n, 4, labels);
    for (std::size_t k = 1; k <= n; ++k) {
      for (long long s : {1LL, 2LL}) {
        const auto model =
            baselines::Mlknn::fit(corpus.features, corpus.labels, labels, {k, static_cast<double>(s)});
        auto check = [&](const baselines::SparseVector& q) {
          ++queries;
          if (model.predict(q) != testing::brute_force_mlknn(corpus, q, k, s)) ++mismatches;
        };
        for (const auto& x : corpus.features) check(x);
        for (int extra = 0; extra < 2; ++extra) check(testing::random_tiny_corpus(rng, 1, 4, 1).features[0]);
      }
    }
  }
  std::size_t prf_bad = 0;
  const auto cases = testing::handcrafted_prf_cases();
  for (const auto& c : cases) {
    const auto m = eval::micro_prf(c.predictions, c.golds);
    const bool same = m.true_positives == c.tp && m.false_positives == c.fp && m.false_negatives == c.fn &&
                      m.exact_matches == c.exact && m.precision == c.precision && m.recall == c.recall &&
                      m.f1 == c.f1 && m.accuracy == c.accuracy;
    if (!same) ++prf_bad;
  }
  return {mismatches == 0 && prf_bad == 0 && cases.size() == 20,
          fmt::format("ML-KNN {} queries, {} mismatches; micro_prf {} cases, {} mismatches", queries, mismatches,
                      cases.size(), prf_bad)};
}

Outcome overfit_smoke() {
  const auto start = Clock::now();
  data::SynthConfig synth;
  synth.num_examples = 20;
  synth.num_labels = 10;
  synth.num_topics = 2;
  synth.seed = 7;
  const auto corpus = data::generate_synthetic(synth);
  const auto vocabs = data::build_vocabs(corpus.records);
  const auto examples = data::encode_all(corpus.records, vocabs);

  model::Architecture arch;
  arch.kind = model::ModelKind::kLdSeq2Seq;
  arch.char_vocab = vocabs.chars.size();
  arch.label_vocab = vocabs.labels.size();
  arch.resources = synth.resource_count;
  arch.hyper = model::HyperParams::preset("desk");
  arch.hyper.epochs = 200;
  // Examples whose descriptions are all empty carry no input to fit.
  std::vector<data::Example> usable;
  for (const auto& ex : examples) {
    if (std::any_of(ex.descriptions.begin(), ex.descriptions.end(), [](const auto& d) { return !d.empty(); }))
      usable.push_back(ex);
  }
  const auto result = model::train_model(arch, usable, usable, vocabs.labels);
  std::size_t first = 0;
  for (const auto& rec : result.history) {
    if (rec.dev_f1 == 1.0) {
      first = rec.epoch;
      break;
    }
  }
  const auto golds = model::gold_sets(usable, vocabs.labels);
  const auto preds = model::predict_sets(result.network, usable, vocabs.labels);
  const double accuracy = eval::exact_match_accuracy(preds, golds);
  const double elapsed = seconds_since(start);
  return {accuracy == 1.0 && elapsed < 300.0,
          fmt::format("{} examples, train exact match {:.4f}, first perfect epoch {}, {:.1f} s", usable.size(),
                      accuracy, first == 0 ? std::string("none") : std::to_string(first), elapsed)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

struct BenchmarkRuns {
  std::map<std::string, std::vector<double>> f1;
  double seconds = 0;
};

BenchmarkRuns run_benchmarks() {
  BenchmarkRuns runs;
  const auto start = Clock::now();
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    app::BenchmarkOptions options;
    options.synth.num_examples = 2500;
    options.synth.noise_rate = 0.2;
    options.synth.num_labels = 50;
    options.synth.resource_count = 2;
    options.synth.resource_fractions = {0.6, 0.6};
    options.synth.seed = seed;
    options.hyper = model::HyperParams::preset("desk");
    options.hyper.seed = seed;
    const auto report = app::run_benchmark(options);
    std::string line;
    for (const auto& row : report.rows) {
      const double f1 = row.metrics ? row.metrics->f1 : -1.0;
      runs.f1[row.model].push_back(f1);
      line += fmt::format(" {}={:.4f}", row.model, f1);
    }
    fmt::print("  seed {}:{}\n", seed, line);
    std::fflush(stdout);
  }
  runs.seconds = seconds_since(start);
  return runs;
}

Outcome model_ordering(const BenchmarkRuns& runs) {
  auto med = [&](const char* name) { return median(runs.f1.at(name)); };
  const double ld = med("ld-seq2seq"), basic = med("basic-seq2seq"), mllr = med("rnn-mllr");
  double classical = -1;
  std::string best;
  for (const char* name : {"mlknn", "lp", "br", "cc"}) {
    if (med(name) > classical) {
      classical = med(name);
      best = name;
    }
  }
  const bool ordered = ld >= basic && basic >= mllr && mllr >= classical;
  return {ordered && runs.seconds < 1800.0,
          fmt::format("median F1 ld {:.4f} >= basic {:.4f} >= mllr {:.4f} >= {} {:.4f}: {}; {:.0f} s for 3 seeds", ld,
                      basic, mllr, best, classical, ordered ? "holds" : "violated", runs.seconds)};
}

Outcome resource_ordering(const BenchmarkRuns& runs) {
  const double multi = median(runs.f1.at("MultiRes"));
  const double r1 = median(runs.f1.at("SingleRes-r1"));
  const double r2 = median(runs.f1.at("SingleRes-r2"));
  const bool ok = multi >= std::max(r1, r2);
  return {ok, fmt::format("median F1 MultiRes {:.4f} vs SingleRes-r1 {:.4f}, SingleRes-r2 {:.4f}", multi, r1, r2)};
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "sememe_acceptance_determinism";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::vector<std::string> checkpoints, reports;
  for (int run = 0; run < 2; ++run) {
    data::SynthConfig synth;
    synth.num_examples = 300;
    synth.seed = 5;
    const auto corpus = app::prepare_synthetic(synth);
    model::Architecture arch;
    arch.kind = model::ModelKind::kLdSeq2Seq;
    arch.char_vocab = corpus.vocabs.chars.size();
    arch.label_vocab = corpus.vocabs.labels.size();
    arch.resources = 2;
    arch.hyper = model::HyperParams::preset("desk");
    arch.hyper.epochs = 2;
    arch.hyper.seed = 5;
    const auto trained = model::train_model(arch, corpus.train, corpus.dev, corpus.vocabs.labels);
    // Same file name in both runs: the header names its blob file.
    const auto run_dir = dir / fmt::format("run{}", run);
    std::filesystem::create_directories(run_dir);
    const auto path = run_dir / "model.ckpt";
    model::save_model(path, trained.network, corpus.vocabs);
    auto bin = path;
    bin += ".bin";
    checkpoints.push_back(file_bytes(path) + file_bytes(bin));

    const auto golds = model::gold_sets(corpus.test, corpus.vocabs.labels);
    const eval::ModelEntry entry{"ld-seq2seq", eval::Section::kModels, [&] {
                                   return model::predict_sets(trained.network, corpus.test, corpus.vocabs.labels);
                                 }};
    const auto report = eval::compare(std::span(&entry, 1), golds, {"test", 5, "fixed"});
    reports.push_back(eval::format_jsonl(report));
  }
  std::filesystem::remove_all(dir);
  const bool same = checkpoints[0] == checkpoints[1] && reports[0] == reports[1] && !checkpoints[0].empty();
  return {same, fmt::format("checkpoints {} ({} bytes), reports {}", checkpoints[0] == checkpoints[1] ? "identical" : "differ",
                            checkpoints[0].size(), reports[0] == reports[1] ? "identical" : "differ")};
}

Outcome soft_vs_hard() {
  const std::vector<int> labels = {3, 4, 5};
  const loss::LabelBag bag(labels, 8);
  const std::vector<int> gold = {3};
  std::size_t cases = 0, bad = 0;
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> base(8);
    for (auto& v : base) v = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
    base[3] += 1.0;
    const double total = std::accumulate(base.begin(), base.end(), 0.0);
    for (auto& v : base) v /= total;
    const double mass = base[3] * (0.1 + 0.8 * static_cast<double>(rng() % 100) / 100.0);
    for (int wrong_in : {4, 5}) {
      for (int wrong_out : {2, 6, 7}) {
        // Both alternatives start from the same mass on their target slot.
        auto start = base;
        const double shared = (base[static_cast<std::size_t>(wrong_in)] + base[static_cast<std::size_t>(wrong_out)]) / 2;
        start[static_cast<std::size_t>(wrong_in)] = shared;
        start[static_cast<std::size_t>(wrong_out)] = shared;
        auto in_bag = start, out_bag = start;
        in_bag[3] -= mass;
        in_bag[static_cast<std::size_t>(wrong_in)] += mass;
        out_bag[3] -= mass;
        out_bag[static_cast<std::size_t>(wrong_out)] += mass;
        nd::Tape tape(false);
        const std::vector<nd::Tensor> pin = {nd::Tensor::from({1, 8}, in_bag)};
        const std::vector<nd::Tensor> pout = {nd::Tensor::from({1, 8}, out_bag)};
        const double soft_in = loss::sequence_loss(tape, pin, gold, bag, loss::LossMode::kSoft).item();
        const double soft_out = loss::sequence_loss(tape, pout, gold, bag, loss::LossMode::kSoft).item();
        const double hard_in = loss::sequence_loss(tape, pin, gold, bag, loss::LossMode::kHard).item();
        const double hard_out = loss::sequence_loss(tape, pout, gold, bag, loss::LossMode::kHard).item();
        ++cases;
        if (!(soft_in < soft_out) || hard_in != hard_out) ++bad;
      }
    }
  }
  return {bad == 0, fmt::format("{} constructed pairs, {} violations", cases, bad)};
}

}  // namespace

// With arguments, only the listed criterion ids run.
int main(int argc, char** argv) {
  nd::set_default_checked(false);
  spdlog::set_level(spdlog::level::warn);
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int id) { return selected.empty() || selected.count(id) != 0; };
  int failures = 0, ran = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    fmt::print("{} criterion {} ({}): {}\n", o.pass ? "PASS" : "FAIL", id, name, o.detail);
    std::fflush(stdout);
    ++ran;
    if (!o.pass) ++failures;
  };
  auto guarded = [](auto&& f) -> Outcome {
    try {
      return f();
    } catch (const std::exception& e) {
      return {false, fmt::format("threw: {}", e.what())};
    }
  };
  if (wanted(1)) report(1, "gradient oracle", guarded(gradient_oracle));
  if (wanted(2)) report(2, "soft-target algebra", guarded(soft_target_algebra));
  if (wanted(3)) report(3, "normalization invariants", guarded(normalization_invariants));
  if (wanted(4)) report(4, "oracle equivalence", guarded(oracle_equivalence));
  if (wanted(5)) report(5, "overfit smoke test", guarded(overfit_smoke));
  if (wanted(6) || wanted(7)) {
    BenchmarkRuns runs;
    std::string bench_error;
    try {
      runs = run_benchmarks();
    } catch (const std::exception& e) {
      bench_error = e.what();
    }
    if (!bench_error.empty()) {
      const Outcome failed{false, "benchmark threw: " + bench_error};
      if (wanted(6)) report(6, "model ordering", failed);
      if (wanted(7)) report(7, "resource ordering", failed);
    } else {
      if (wanted(6)) report(6, "model ordering", guarded([&] { return model_ordering(runs); }));
      if (wanted(7)) report(7, "resource ordering", guarded([&] { return resource_ordering(runs); }));
    }
  }
  if (wanted(8)) report(8, "determinism", guarded(determinism));
  if (wanted(9)) report(9, "soft vs hard loss", guarded(soft_vs_hard));
  fmt::print("{} of {} criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
