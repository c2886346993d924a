#include "sememe/app/gradcheck_suite.hpp"

#include <functional>
#include <memory>

#include <fmt/format.h>

#include "sememe/common/seed.hpp"
#include "sememe/loss/sequence_loss.hpp"
#include "sememe/model/network.hpp"
#include "sememe/nd/params.hpp"

namespace sememe::app {

namespace {

using nd::ParamSet;
using nd::Rng;
using nd::Tape;
using nd::Tensor;

Tensor positive(nd::Shape shape, Rng& rng) {
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  std::vector<double> v(nd::numel(shape));
  for (auto& x : v) x = dist(rng);
  return Tensor::from(std::move(shape), std::move(v), true);
}

// Random fixed weights turn any output into a scalar with a nontrivial
// gradient everywhere.
Tensor weighted_sum(Tape& tape, const Tensor& out, const Tensor& weights) {
  return tape.sum(tape.mul(out, weights));
}

struct Case {
  std::string name;
  ParamSet params;
  nd::LossFn loss;
};

std::vector<Case> primitive_cases(Rng& rng) {
  std::vector<Case> cases;
  auto add = [&](std::string name, ParamSet params, nd::Shape out_shape, std::function<Tensor(Tape&, ParamSet&)> f) {
    auto shared = std::make_shared<ParamSet>(params);
    const Tensor w = nd::uniform(out_shape, 1.0, rng, false);
    cases.push_back({std::move(name), params, [shared, w, f](Tape& tape) { return weighted_sum(tape, f(tape, *shared), w); }});
  };
  auto param = [&](std::initializer_list<std::pair<const char*, Tensor>> list) {
    ParamSet p;
    for (const auto& [n, t] : list) p.add(n, t);
    return p;
  };
  auto u = [&](nd::Shape s) { return nd::uniform(std::move(s), 1.0, rng); };

  add("matmul", param({{"a", u({3, 4})}, {"b", u({4, 2})}}), {3, 2},
      [](Tape& t, ParamSet& p) { return t.matmul(p.get("a"), p.get("b")); });
  add("add", param({{"a", u({3, 4})}, {"b", u({3, 4})}}), {3, 4},
      [](Tape& t, ParamSet& p) { return t.add(p.get("a"), p.get("b")); });
  add("add_row_broadcast", param({{"a", u({3, 4})}, {"b", u({1, 4})}}), {3, 4},
      [](Tape& t, ParamSet& p) { return t.add(p.get("a"), p.get("b")); });
  add("sub", param({{"a", u({3, 4})}, {"b", u({1, 4})}}), {3, 4},
      [](Tape& t, ParamSet& p) { return t.sub(p.get("a"), p.get("b")); });
  add("mul", param({{"a", u({3, 4})}, {"b", u({3, 4})}}), {3, 4},
      [](Tape& t, ParamSet& p) { return t.mul(p.get("a"), p.get("b")); });
  add("mul_scalar_broadcast", param({{"a", u({3, 4})}, {"b", u({1, 1})}}), {3, 4},
      [](Tape& t, ParamSet& p) { return t.mul(p.get("a"), p.get("b")); });
  add("scale", param({{"a", u({2, 3})}}), {2, 3}, [](Tape& t, ParamSet& p) { return t.scale(p.get("a"), -1.7); });
  add("concat", param({{"a", u({2, 3})}, {"b", u({2, 2})}}), {2, 5}, [](Tape& t, ParamSet& p) {
    const Tensor parts[] = {p.get("a"), p.get("b")};
    return t.concat(parts, 1);
  });
  add("concat_rows", param({{"a", u({2, 3})}, {"b", u({1, 3})}}), {3, 3}, [](Tape& t, ParamSet& p) {
    const Tensor parts[] = {p.get("a"), p.get("b")};
    return t.concat(parts, 0);
  });
  add("slice", param({{"a", u({3, 5})}}), {3, 2}, [](Tape& t, ParamSet& p) { return t.slice(p.get("a"), 1, 2, 2); });
  add("transpose", param({{"a", u({2, 4})}}), {4, 2}, [](Tape& t, ParamSet& p) { return t.transpose(p.get("a")); });
  add("tanh", param({{"a", u({3, 3})}}), {3, 3}, [](Tape& t, ParamSet& p) { return t.tanh(p.get("a")); });
  add("sigmoid", param({{"a", u({3, 3})}}), {3, 3}, [](Tape& t, ParamSet& p) { return t.sigmoid(p.get("a")); });
  add("softmax", param({{"a", u({2, 5})}}), {2, 5}, [](Tape& t, ParamSet& p) { return t.softmax(p.get("a")); });
  add("log", param({{"a", positive({2, 4}, rng)}}), {2, 4}, [](Tape& t, ParamSet& p) { return t.log(p.get("a")); });
  add("sum", param({{"a", u({2, 3})}}), {}, [](Tape& t, ParamSet& p) { return t.sum(p.get("a")); });
  add("mean", param({{"a", u({2, 3})}}), {}, [](Tape& t, ParamSet& p) { return t.mean(p.get("a")); });
  add("embedding", param({{"table", u({5, 3})}}), {4, 3}, [](Tape& t, ParamSet& p) {
    static const int ids[] = {4, 0, 4, 2};
    return t.embedding(p.get("table"), ids);
  });
  auto bags = std::make_shared<const nd::Bags>(nd::Bags{{{0, 2.0}, {3, 1.0}}, {}, {{1, 0.5}, {1, 1.5}, {4, -1.0}}});
  add("embedding_bag", param({{"table", u({5, 3})}}), {3, 3},
      [bags](Tape& t, ParamSet& p) { return t.embedding_bag(p.get("table"), bags); });
  return cases;
}

std::vector<Case> loss_cases(Rng& rng) {
  std::vector<Case> cases;
  const std::size_t V = 7;
  const std::vector<int> gold = {4, 6, 3, 2};  // three labels then EOS
  for (auto mode : {loss::LossMode::kSoft, loss::LossMode::kHard}) {
    auto params = std::make_shared<ParamSet>();
    params->add("logits", nd::uniform({gold.size(), V}, 2.0, rng));
    cases.push_back({fmt::format("sequence_loss_{}", loss::loss_mode_name(mode)), *params, [params, gold, mode](Tape& tape) {
                       const Tensor probs = tape.softmax(params->get("logits"));
                       std::vector<Tensor> steps;
                       for (std::size_t t = 0; t < gold.size(); ++t) steps.push_back(tape.slice(probs, 0, t, 1));
                       const std::vector<int> labels(gold.begin(), gold.end() - 1);
                       const loss::LabelBag bag(labels, V);
                       return loss::sequence_loss(tape, steps, gold, bag, mode);
                     }});
  }
  return cases;
}

std::vector<Case> model_cases(std::uint64_t seed) {
  std::vector<Case> cases;
  std::vector<data::Example> batch(2);
  batch[0].word = "x";
  batch[0].descriptions = {{3, 4, 5, 3}, {6, 7}};
  batch[0].labels = {3, 5};
  batch[1].word = "y";
  batch[1].descriptions = {{}, {5, 4, 7}};
  batch[1].labels = {6, 4, 3};
  auto examples = std::make_shared<std::vector<data::Example>>(batch);

  for (auto kind : {model::ModelKind::kLdSeq2Seq, model::ModelKind::kBasicSeq2Seq, model::ModelKind::kRnnMllr}) {
    model::Architecture arch;
    arch.kind = kind;
    arch.char_vocab = 8;
    arch.label_vocab = 7;
    arch.resources = 2;
    arch.hyper.char_dim = 4;
    arch.hyper.label_dim = 3;
    arch.hyper.hidden_dim = 3;
    arch.hyper.max_len = 8;
    Rng rng(derive_seed(seed, model::model_kind_name(kind)));
    auto net = std::make_shared<model::Network>(arch, rng);
    if (kind == model::ModelKind::kRnnMllr) {
      // The head starts at zero; random values exercise every path.
      for (auto name : {"head.w", "head.b"}) {
        for (auto& v : net->params().get(name).values_mut()) v = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
      }
    }
    cases.push_back({fmt::format("{}_batch_loss", model::model_kind_name(kind)), net->params(), [net, examples](Tape& tape) {
                       const data::Example* ptrs[] = {&(*examples)[0], &(*examples)[1]};
                       return net->batch_loss(tape, ptrs);
                     }});
  }
  return cases;
}

}  // namespace

std::vector<GradCheckEntry> run_gradcheck_suite(const GradCheckSuiteOptions& options) {
  std::vector<GradCheckEntry> out;
  nd::GradCheckOptions gc;
  gc.epsilon = options.epsilon;
  gc.seed = options.seed;
  auto run = [&](Case& c, const std::string& name) {
    GradCheckEntry e;
    e.name = name;
    e.result = nd::grad_check(c.loss, c.params, gc);
    e.passed = e.result.max_rel_error < options.tolerance;
    out.push_back(std::move(e));
  };
  for (std::size_t trial = 0; trial < options.trials_per_op; ++trial) {
    Rng rng(derive_seed(options.seed, fmt::format("primitives/{}", trial)));
    for (auto& c : primitive_cases(rng)) run(c, fmt::format("op/{}#{}", c.name, trial));
  }
  Rng rng(derive_seed(options.seed, "losses"));
  for (auto& c : loss_cases(rng)) run(c, "loss/" + c.name);
  for (auto& c : model_cases(options.seed)) run(c, "model/" + c.name);
  return out;
}

}  // namespace sememe::app
