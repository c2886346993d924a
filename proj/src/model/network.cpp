#include "sememe/model/network.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sememe/common/error.hpp"
#include "sememe/loss/sequence_loss.hpp"

namespace sememe::model {

using nd::Tape;

std::size_t argmax(std::span<const Real> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Network::Network(Architecture arch, nd::Rng& rng) : arch_(std::move(arch)) {
  arch_.hyper.validate();
  build(&rng);
}

Network::Network(Architecture arch, const nd::ParamSet& params) : arch_(std::move(arch)) {
  arch_.hyper.validate();
  build(nullptr);
  for (const auto& [name, t] : params) {
    if (!params_.contains(name)) throw DataError(fmt::format("unexpected parameter '{}' for this model", name));
  }
  for (const auto& [name, t] : params_) {
    if (!params.contains(name)) throw DataError(fmt::format("missing parameter '{}'", name));
  }
  params_.assign_values(params);
}

Tensor Network::add_param(const std::string& name, nd::Shape shape, nd::Rng* rng, bool zero) {
  Tensor t = (rng == nullptr || zero) ? Tensor::zeros(std::move(shape)) : nd::uniform(std::move(shape), nd::kInitBound, *rng);
  params_.add(name, t);
  return t;
}

Network::Gru Network::add_gru(const std::string& prefix, std::size_t input, std::size_t hidden, nd::Rng* rng) {
  Gru g;
  g.hidden = hidden;
  g.wx = add_param(prefix + ".wx", {input, 3 * hidden}, rng);
  g.wh = add_param(prefix + ".wh", {hidden, 3 * hidden}, rng);
  g.bx = add_param(prefix + ".bx", {1, 3 * hidden}, rng);
  g.bh = add_param(prefix + ".bh", {1, 3 * hidden}, rng);
  return g;
}

void Network::build(nd::Rng* rng) {
  const auto& hp = arch_.hyper;
  if (arch_.resources == 0) throw UsageError("a model needs at least one resource");
  if (arch_.char_vocab <= static_cast<std::size_t>(data::Vocab::kReserved) ||
      arch_.label_vocab <= static_cast<std::size_t>(data::Vocab::kReserved)) {
    throw DataError("vocabularies must contain at least one non-reserved token");
  }
  const std::size_t H = hp.hidden_dim;
  const std::size_t S = 2 * H;
  const std::size_t R = arch_.resources;

  char_emb_ = add_param("char_emb", {arch_.char_vocab, hp.char_dim}, rng);
  for (std::size_t r = 0; r < R; ++r) {
    forward_.push_back(add_gru(fmt::format("enc{}.fwd", r), hp.char_dim, H, rng));
    backward_.push_back(add_gru(fmt::format("enc{}.bwd", r), hp.char_dim, H, rng));
  }
  if (R > 1) {
    for (std::size_t r = 0; r < R; ++r) {
      summary_gate_.push_back(
          {add_param(fmt::format("gate{}.w", r), {R * S, S}, rng), add_param(fmt::format("gate{}.b", r), {1, S}, rng)});
    }
  }

  if (!is_seq2seq(arch_.kind)) {
    head_ = {add_param("head.w", {S, arch_.label_vocab}, rng, true), add_param("head.b", {1, arch_.label_vocab}, rng, true)};
    return;
  }

  for (std::size_t r = 0; r < R; ++r) {
    attention_.push_back({add_param(fmt::format("att{}.w", r), {H, H}, rng),
                          add_param(fmt::format("att{}.u", r), {S, H}, rng),
                          add_param(fmt::format("att{}.v", r), {H, 1}, rng)});
  }
  if (R > 1) {
    for (std::size_t r = 0; r < R; ++r) {
      context_gate_.push_back({add_param(fmt::format("ctx_gate{}.w", r), {R * S, S}, rng),
                               add_param(fmt::format("ctx_gate{}.b", r), {1, S}, rng)});
    }
  }
  label_emb_ = add_param("label_emb", {arch_.label_vocab, hp.label_dim}, rng);
  start_ = add_param("start", {1, hp.label_dim}, rng);
  init_ = {add_param("init.w", {S, H}, rng), add_param("init.b", {1, H}, rng)};
  decoder_ = add_gru("dec", S + hp.label_dim, H, rng);
  out_ = {add_param("out.w", {H, arch_.label_vocab}, rng), add_param("out.b", {1, arch_.label_vocab}, rng)};
}

// x_proj already holds x Wx + bx. Gate layout along the last axis: r, z, n.
Tensor Network::gru_step(Tape& tape, const Tensor& x_proj, const Tensor& h, const Gru& g) const {
  const std::size_t H = g.hidden;
  const Tensor gh = tape.add(tape.matmul(h, g.wh), g.bh);
  const Tensor rz = tape.sigmoid(tape.add(tape.slice(x_proj, 1, 0, 2 * H), tape.slice(gh, 1, 0, 2 * H)));
  const Tensor r = tape.slice(rz, 1, 0, H);
  const Tensor z = tape.slice(rz, 1, H, H);
  const Tensor n = tape.tanh(tape.add(tape.slice(x_proj, 1, 2 * H, H), tape.mul(r, tape.slice(gh, 1, 2 * H, H))));
  // (1 - z) * n + z * h
  return tape.add(n, tape.mul(z, tape.sub(h, n)));
}

ResourceEncoding Network::encode_resource(Tape& tape, std::size_t resource, std::span<const int> tokens) const {
  if (resource >= arch_.resources) {
    throw UsageError(fmt::format("resource {} requested from a model with {}", resource, arch_.resources));
  }
  if (tokens.empty()) throw UsageError("encode_resource: empty description");
  const std::size_t H = arch_.hyper.hidden_dim;
  const std::size_t len = tokens.size();
  const Tensor x = tape.embedding(char_emb_, tokens);

  ResourceEncoding out;
  out.empty = false;
  out.forward.resize(len);
  out.backward.resize(len);

  const Gru& f = forward_[resource];
  const Tensor xf = tape.add(tape.matmul(x, f.wx), f.bx);
  Tensor h = Tensor::zeros({1, H});
  for (std::size_t t = 0; t < len; ++t) {
    h = gru_step(tape, len == 1 ? xf : tape.slice(xf, 0, t, 1), h, f);
    out.forward[t] = h;
  }
  const Gru& b = backward_[resource];
  const Tensor xb = tape.add(tape.matmul(x, b.wx), b.bx);
  h = Tensor::zeros({1, H});
  for (std::size_t t = len; t-- > 0;) {
    h = gru_step(tape, len == 1 ? xb : tape.slice(xb, 0, t, 1), h, b);
    out.backward[t] = h;
  }

  finish_resource(tape, resource, out);
  return out;
}

void Network::finish_resource(Tape& tape, std::size_t resource, ResourceEncoding& out) const {
  const std::size_t len = out.forward.size();
  const Tensor fwd = len == 1 ? out.forward[0] : tape.concat(out.forward, 0);
  const Tensor bwd = len == 1 ? out.backward[0] : tape.concat(out.backward, 0);
  const Tensor both[] = {fwd, bwd};
  out.hidden = tape.concat(both, 1);
  const Tensor ends[] = {out.forward.back(), out.backward.front()};
  out.summary = tape.concat(ends, 1);
  if (is_seq2seq(arch_.kind)) out.keys = tape.matmul(out.hidden, attention_[resource].u);
}

namespace {

void check_descriptions(const std::vector<std::vector<int>>& descriptions, std::size_t resources) {
  if (descriptions.size() != resources) {
    throw DataError(fmt::format("model expects {} descriptions per example, got {}", resources, descriptions.size()));
  }
  if (std::all_of(descriptions.begin(), descriptions.end(), [](const auto& d) { return d.empty(); })) {
    throw DataError("every description of the example is empty");
  }
}

}  // namespace

EncoderOutput Network::encode(Tape& tape, const std::vector<std::vector<int>>& descriptions) const {
  check_descriptions(descriptions, arch_.resources);
  EncoderOutput enc;
  for (std::size_t r = 0; r < arch_.resources; ++r) {
    enc.resources.push_back(descriptions[r].empty() ? empty_resource() : encode_resource(tape, r, descriptions[r]));
  }
  combine_resources(tape, enc);
  return enc;
}

ResourceEncoding Network::empty_resource() const {
  ResourceEncoding empty;
  empty.summary = Tensor::zeros({1, summary_dim()});
  return empty;
}

void Network::combine_resources(Tape& tape, EncoderOutput& enc) const {
  if (arch_.resources == 1) {
    enc.summary = enc.resources[0].summary;
    return;
  }
  std::vector<Tensor> summaries;
  for (const auto& res : enc.resources) summaries.push_back(res.summary);
  const Tensor all = tape.concat(summaries, 1);
  for (std::size_t r = 0; r < arch_.resources; ++r) {
    const Tensor g = tape.sigmoid(tape.add(tape.matmul(all, summary_gate_[r].w), summary_gate_[r].b));
    enc.gates.push_back(g);
    const Tensor part = tape.mul(g, enc.resources[r].summary);
    enc.summary = r == 0 ? part : tape.add(enc.summary, part);
  }
}

// Runs one direction of a resource encoder over many descriptions at once.
// `order` lists descriptions by decreasing length, so the rows still active
// at any position form a prefix; finished rows keep their last state.
// Returns states[t] with one row per description longer than t.
std::vector<Tensor> Network::run_packed(Tape& tape, const Gru& g, const std::vector<std::span<const int>>& tokens,
                                        const std::vector<std::size_t>& order, bool reverse) const {
  const std::size_t H = g.hidden;
  const std::size_t L = tokens[order.front()].size();
  auto active = [&](std::size_t t) {
    std::size_t n = 0;
    while (n < order.size() && tokens[order[n]].size() > t) ++n;
    return n;
  };
  std::vector<Tensor> states(L);
  Tensor h;
  std::size_t rows = 0;
  std::vector<int> ids;
  for (std::size_t i = 0; i < L; ++i) {
    const std::size_t t = reverse ? L - 1 - i : i;
    const std::size_t n = active(t);
    ids.clear();
    for (std::size_t k = 0; k < n; ++k) ids.push_back(tokens[order[k]][t]);
    const Tensor x_proj = tape.add(tape.matmul(tape.embedding(char_emb_, ids), g.wx), g.bx);
    // Forward: rows only drop out. Reverse: rows only join, from a zero state.
    Tensor prev;
    if (rows == 0) {
      prev = Tensor::zeros({n, H});
    } else if (n < rows) {
      prev = tape.slice(h, 0, 0, n);
    } else if (n > rows) {
      const Tensor parts[] = {h, Tensor::zeros({n - rows, H})};
      prev = tape.concat(parts, 0);
    } else {
      prev = h;
    }
    h = gru_step(tape, x_proj, prev, g);
    rows = n;
    states[t] = h;
  }
  return states;
}

std::vector<EncoderOutput> Network::encode_batch(Tape& tape,
                                                 std::span<const std::vector<std::vector<int>>* const> batch) const {
  for (const auto* d : batch) check_descriptions(*d, arch_.resources);
  std::vector<EncoderOutput> out(batch.size());
  for (std::size_t r = 0; r < arch_.resources; ++r) {
    std::vector<std::span<const int>> tokens;
    std::vector<std::size_t> owner;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const auto& d = (*batch[b])[r];
      if (d.empty()) continue;
      tokens.emplace_back(d);
      owner.push_back(b);
    }
    std::vector<ResourceEncoding> encoded(tokens.size());
    if (!tokens.empty()) {
      std::vector<std::size_t> order(tokens.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return tokens[a].size() > tokens[b].size(); });
      const auto fwd = run_packed(tape, forward_[r], tokens, order, false);
      const auto bwd = run_packed(tape, backward_[r], tokens, order, true);
      for (std::size_t k = 0; k < order.size(); ++k) {
        auto& res = encoded[order[k]];
        const std::size_t len = tokens[order[k]].size();
        res.empty = false;
        res.forward.resize(len);
        res.backward.resize(len);
        for (std::size_t t = 0; t < len; ++t) {
          res.forward[t] = fwd[t].dim(0) == 1 ? fwd[t] : tape.slice(fwd[t], 0, k, 1);
          res.backward[t] = bwd[t].dim(0) == 1 ? bwd[t] : tape.slice(bwd[t], 0, k, 1);
        }
        finish_resource(tape, r, res);
      }
    }
    std::size_t next = 0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const bool present = next < owner.size() && owner[next] == b;
      out[b].resources.push_back(present ? std::move(encoded[next++]) : empty_resource());
    }
  }
  for (auto& enc : out) combine_resources(tape, enc);
  return out;
}

DecoderState Network::initial_state(Tape& tape, const EncoderOutput& enc) const {
  if (!is_seq2seq(arch_.kind)) throw UsageError("rnn-mllr has no decoder");
  return {tape.tanh(tape.add(tape.matmul(enc.summary, init_.w), init_.b)), 0};
}

// Additive attention scored with the previous decoder state.
Tensor Network::attend(Tape& tape, const Attention& att, const ResourceEncoding& res, const Tensor& query,
                       Tensor* weights) const {
  const Tensor e = tape.tanh(tape.add(res.keys, tape.matmul(query, att.w)));
  const Tensor alpha = tape.softmax(tape.transpose(tape.matmul(e, att.v)));
  *weights = alpha;
  return tape.matmul(alpha, res.hidden);
}

StepOutput Network::decode_step(Tape& tape, const DecoderState& state, const EncoderOutput& enc, int previous) const {
  if (!is_seq2seq(arch_.kind)) throw UsageError("rnn-mllr has no decoder");
  if (state.step > arch_.hyper.max_len) {
    throw UsageError(fmt::format("decode step {} exceeds the limit of {}", state.step, arch_.hyper.max_len));
  }
  const std::size_t R = arch_.resources;
  StepOutput out;
  out.attention.resize(R);
  std::vector<Tensor> contexts(R);
  for (std::size_t r = 0; r < R; ++r) {
    const auto& res = enc.resources[r];
    contexts[r] = res.empty ? Tensor::zeros({1, summary_dim()})
                            : attend(tape, attention_[r], res, state.hidden, &out.attention[r]);
  }
  if (R == 1) {
    out.context = contexts[0];
  } else {
    const Tensor all = tape.concat(contexts, 1);
    for (std::size_t r = 0; r < R; ++r) {
      const Tensor g = tape.sigmoid(tape.add(tape.matmul(all, context_gate_[r].w), context_gate_[r].b));
      out.context_gates.push_back(g);
      const Tensor part = tape.mul(g, contexts[r]);
      out.context = r == 0 ? part : tape.add(out.context, part);
    }
  }
  const int ids[] = {previous};
  const Tensor e_prev = previous < 0 ? start_ : tape.embedding(label_emb_, ids);
  const Tensor input_parts[] = {out.context, e_prev};
  const Tensor input = tape.concat(input_parts, 1);
  const Tensor x_proj = tape.add(tape.matmul(input, decoder_.wx), decoder_.bx);
  out.state = {gru_step(tape, x_proj, state.hidden, decoder_), state.step + 1};
  out.probs = tape.softmax(tape.add(tape.matmul(out.state.hidden, out_.w), out_.b));
  return out;
}

Tensor Network::mllr_logits(Tape& tape, const EncoderOutput& enc) const {
  return tape.add(tape.matmul(enc.summary, head_.w), head_.b);
}

Tensor Network::example_loss(Tape& tape, const data::Example& ex) const {
  return encoded_loss(tape, ex, encode(tape, ex.descriptions));
}

Tensor Network::encoded_loss(Tape& tape, const data::Example& ex, const EncoderOutput& enc) const {
  const std::size_t V = arch_.label_vocab;
  if (!is_seq2seq(arch_.kind)) {
    std::vector<Real> target(V, 0.0);
    std::vector<Real> negative(V, 1.0);
    for (int r = 0; r < data::Vocab::kReserved; ++r) negative[static_cast<std::size_t>(r)] = 0.0;
    for (int id : ex.labels) {
      target[static_cast<std::size_t>(id)] = 1.0;
      negative[static_cast<std::size_t>(id)] = 0.0;
    }
    const Tensor logits = mllr_logits(tape, enc);
    // log(1 - sigmoid(x)) = log(sigmoid(-x)) keeps precision for large x.
    const Tensor log_p = tape.log(tape.sigmoid(logits), loss::kLogFloor);
    const Tensor log_q = tape.log(tape.sigmoid(tape.scale(logits, -1.0)), loss::kLogFloor);
    const Tensor pos = tape.sum(tape.mul(log_p, Tensor::from({1, V}, std::move(target))));
    const Tensor neg = tape.sum(tape.mul(log_q, Tensor::from({1, V}, std::move(negative))));
    return tape.scale(tape.add(pos, neg), -1.0);
  }

  std::vector<int> gold = ex.labels;
  gold.push_back(data::Vocab::kEos);
  if (gold.size() > arch_.hyper.max_len + 1) {
    throw DataError(fmt::format("word '{}' has {} labels, model limit is {}", ex.word, ex.labels.size(),
                                arch_.hyper.max_len));
  }
  const loss::LabelBag bag(ex.labels, V);
  DecoderState state = initial_state(tape, enc);
  std::vector<Tensor> probs;
  int previous = -1;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    StepOutput step = decode_step(tape, state, enc, previous);
    previous = arch_.hyper.feed_predictions ? static_cast<int>(argmax(step.probs.values())) : gold[t];
    state = std::move(step.state);
    probs.push_back(std::move(step.probs));
  }
  return loss::sequence_loss(tape, probs, gold, bag, arch_.hyper.resolved_loss(arch_.kind));
}

Tensor Network::batch_loss(Tape& tape, std::span<const data::Example* const> batch) const {
  if (batch.empty()) throw UsageError("empty batch");
  std::vector<const std::vector<std::vector<int>>*> descriptions;
  for (const auto* ex : batch) descriptions.push_back(&ex->descriptions);
  const auto encoded = encode_batch(tape, descriptions);
  Tensor total;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Tensor l = encoded_loss(tape, *batch[b], encoded[b]);
    total = total.defined() ? tape.add(total, l) : l;
  }
  return tape.scale(total, 1.0 / static_cast<Real>(batch.size()));
}

void Network::require_finite() const {
  if (!params_.all_finite()) throw NumericError("model parameters contain NaN or Inf");
}

Prediction Network::predict(const std::vector<std::vector<int>>& descriptions) const {
  require_finite();
  Tape tape(false);
  const EncoderOutput enc = encode(tape, descriptions);
  DecoderState state = initial_state(tape, enc);
  Prediction pred;
  std::vector<bool> used(arch_.label_vocab, false);
  used[data::Vocab::kPad] = true;
  used[data::Vocab::kUnk] = true;
  int previous = -1;
  for (std::size_t t = 0; t < arch_.hyper.max_len; ++t) {
    StepOutput step = decode_step(tape, state, enc, previous);
    state = std::move(step.state);
    const auto p = step.probs.values();
    pred.step_probs.emplace_back(p.begin(), p.end());
    std::size_t best = data::Vocab::kEos;
    for (std::size_t i = 0; i < p.size(); ++i) {
      // Strict comparison in id order keeps the lowest id on ties.
      if (!used[i] && p[i] > p[best]) best = i;
    }
    if (best == static_cast<std::size_t>(data::Vocab::kEos)) {
      if (t == 0) spdlog::debug("EOS at the first step; predicting an empty label set");
      break;
    }
    used[best] = true;
    pred.labels.push_back(static_cast<int>(best));
    previous = static_cast<int>(best);
  }
  return pred;
}

std::vector<Real> Network::label_probabilities(const std::vector<std::vector<int>>& descriptions) const {
  if (is_seq2seq(arch_.kind)) throw UsageError("label_probabilities is only defined for rnn-mllr");
  require_finite();
  Tape tape(false);
  const EncoderOutput enc = encode(tape, descriptions);
  const Tensor probs = tape.sigmoid(mllr_logits(tape, enc));
  return {probs.values().begin(), probs.values().end()};
}

std::vector<int> Network::predict_labels(const std::vector<std::vector<int>>& descriptions) const {
  if (std::all_of(descriptions.begin(), descriptions.end(), [](const auto& d) { return d.empty(); })) return {};
  if (is_seq2seq(arch_.kind)) return predict(descriptions).labels;
  const auto probs = label_probabilities(descriptions);
  std::vector<int> out;
  for (std::size_t i = data::Vocab::kReserved; i < probs.size(); ++i) {
    if (probs[i] > 0.5) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace sememe::model
