#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sememe/data/corpus.hpp"
#include "sememe/model/hyper.hpp"
#include "sememe/nd/params.hpp"
#include "sememe/nd/tape.hpp"

namespace sememe::model {

using nd::Real;
using nd::Tensor;

// Everything needed to rebuild the parameter layout of a network.
struct Architecture {
  ModelKind kind = ModelKind::kLdSeq2Seq;
  std::size_t char_vocab = 0;
  std::size_t label_vocab = 0;
  std::size_t resources = 1;
  HyperParams hyper;
};

// BiGRU states of one description. An absent description has no states and
// a zero summary.
struct ResourceEncoding {
  bool empty = true;
  std::vector<Tensor> forward;   // [1, H] per position
  std::vector<Tensor> backward;  // [1, H] per position; backward[0] is the last state
  Tensor hidden;                 // [l, 2H] rows [forward_i ; backward_i]
  Tensor summary;                // [1, 2H] = [forward_l ; backward_1]
  Tensor keys;                   // [l, A] attention keys (seq2seq only)
};

struct EncoderOutput {
  std::vector<ResourceEncoding> resources;
  std::vector<Tensor> gates;  // [1, 2H] per resource; none with a single resource
  Tensor summary;             // v_d
};

struct DecoderState {
  Tensor hidden;  // s_t, [1, H]
  std::size_t step = 0;
};

struct StepOutput {
  DecoderState state;
  Tensor probs;                        // [1, label_vocab]
  std::vector<Tensor> attention;       // [1, l] per resource; undefined when empty
  std::vector<Tensor> context_gates;   // [1, 2H] per resource; none with a single resource
  Tensor context;                      // c_t, [1, 2H]
};

struct Prediction {
  std::vector<int> labels;
  std::vector<std::vector<Real>> step_probs;
};

/// Multi-resource BiGRU encoder with either an attention GRU decoder
/// (seq2seq kinds) or an independent sigmoid per label (rnn-mllr).
///
/// Row-vector convention throughout: a layer maps x [1, n] to x W + b with
/// W [n, m]. Each resource has its own encoder and attention weights; the
/// character embedding table is shared. Copies share parameter storage.
class Network {
 public:
  Network(Architecture arch, nd::Rng& rng);
  // Adopts trained parameters; names and shapes must match the layout.
  Network(Architecture arch, const nd::ParamSet& params);

  const Architecture& architecture() const noexcept { return arch_; }
  nd::ParamSet& params() noexcept { return params_; }
  const nd::ParamSet& params() const noexcept { return params_; }

  ResourceEncoding encode_resource(nd::Tape& tape, std::size_t resource, std::span<const int> tokens) const;
  // Throws DataError when every description is empty.
  EncoderOutput encode(nd::Tape& tape, const std::vector<std::vector<int>>& descriptions) const;
  // Same values as encode() per example, with each resource encoder run over
  // the whole batch at once.
  std::vector<EncoderOutput> encode_batch(nd::Tape& tape,
                                          std::span<const std::vector<std::vector<int>>* const> batch) const;

  DecoderState initial_state(nd::Tape& tape, const EncoderOutput& enc) const;
  // previous < 0 feeds the learned start embedding.
  StepOutput decode_step(nd::Tape& tape, const DecoderState& state, const EncoderOutput& enc, int previous) const;

  // Per-example training loss: sequence loss for seq2seq kinds, summed
  // per-label binary cross entropy for rnn-mllr.
  Tensor example_loss(nd::Tape& tape, const data::Example& example) const;
  Tensor encoded_loss(nd::Tape& tape, const data::Example& example, const EncoderOutput& enc) const;
  // Mean of example_loss over the batch.
  Tensor batch_loss(nd::Tape& tape, std::span<const data::Example* const> batch) const;

  // Greedy decoding with already-emitted labels, PAD and UNK masked.
  Prediction predict(const std::vector<std::vector<int>>& descriptions) const;
  // Sigmoid probability per label id (rnn-mllr).
  std::vector<Real> label_probabilities(const std::vector<std::vector<int>>& descriptions) const;
  // Label ids for either kind; empty when every description is empty.
  std::vector<int> predict_labels(const std::vector<std::vector<int>>& descriptions) const;

  std::size_t summary_dim() const noexcept { return 2 * arch_.hyper.hidden_dim; }

 private:
  struct Gru {
    Tensor wx, wh, bx, bh;
    std::size_t hidden = 0;
  };
  struct Affine {
    Tensor w, b;
  };
  struct Attention {
    Tensor w, u, v;
  };

  void build(nd::Rng* rng);
  Tensor add_param(const std::string& name, nd::Shape shape, nd::Rng* rng, bool zero = false);
  Gru add_gru(const std::string& prefix, std::size_t input, std::size_t hidden, nd::Rng* rng);
  Tensor gru_step(nd::Tape& tape, const Tensor& x_proj, const Tensor& h, const Gru& gru) const;
  std::vector<Tensor> run_packed(nd::Tape& tape, const Gru& gru, const std::vector<std::span<const int>>& tokens,
                                 const std::vector<std::size_t>& order, bool reverse) const;
  void finish_resource(nd::Tape& tape, std::size_t resource, ResourceEncoding& out) const;
  ResourceEncoding empty_resource() const;
  void combine_resources(nd::Tape& tape, EncoderOutput& enc) const;
  Tensor attend(nd::Tape& tape, const Attention& att, const ResourceEncoding& res, const Tensor& query,
                Tensor* weights) const;
  Tensor mllr_logits(nd::Tape& tape, const EncoderOutput& enc) const;
  void require_finite() const;

  Architecture arch_;
  nd::ParamSet params_;

  Tensor char_emb_;
  std::vector<Gru> forward_;
  std::vector<Gru> backward_;
  std::vector<Affine> summary_gate_;
  std::vector<Affine> context_gate_;
  std::vector<Attention> attention_;
  Tensor label_emb_;
  Tensor start_;
  Gru decoder_;
  Affine init_;
  Affine out_;
  Affine head_;
};

// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const Real> values);

}  // namespace sememe::model
