#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "sememe/nd/tensor.hpp"

namespace sememe::nd {

enum class OpKind {
  kMatMul,
  kAdd,
  kSub,
  kMul,
  kScale,
  kConcat,
  kSlice,
  kTranspose,
  kTanh,
  kSigmoid,
  kSoftmax,
  kLog,
  kSum,
  kMean,
  kEmbedding,
  kEmbeddingBag,
};

std::string_view op_name(OpKind kind);

// One weighted row reference of an embedding bag.
struct BagItem {
  std::size_t index;
  Real weight;
};
using Bags = std::vector<std::vector<BagItem>>;

// Process-wide default for new tapes. Checked tapes scan every op's inputs and
// output for NaN/Inf and throw NumericError naming the op.
void set_default_checked(bool checked) noexcept;
bool default_checked() noexcept;

/// Records primitive ops in execution order and replays them in reverse.
///
/// A tape belongs to one thread. Ops whose inputs all lack requires_grad are
/// computed but not recorded; a tape built with `record = false` never records
/// and is the inference path. backward() may run once per tape.
///
/// Shape rules: elementwise binary ops accept equal shapes, a `[1,n]` right
/// operand broadcast over the rows of an `[m,n]` left operand, or a
/// single-element right operand. matmul, transpose and the embedding ops are
/// 2-d only; softmax normalizes the last axis.
class Tape {
 public:
  explicit Tape(bool record = true);
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) noexcept;
  Tape& operator=(Tape&&) noexcept;

  bool recording() const noexcept { return record_; }
  bool checked() const noexcept { return checked_; }
  void set_checked(bool checked) noexcept { checked_ = checked; }

  Tensor matmul(const Tensor& a, const Tensor& b);
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);
  Tensor scale(const Tensor& a, Real factor);
  Tensor concat(std::span<const Tensor> parts, std::size_t axis);
  Tensor slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length);
  Tensor transpose(const Tensor& a);
  Tensor tanh(const Tensor& a);
  Tensor sigmoid(const Tensor& a);
  Tensor softmax(const Tensor& a);
  // log(max(a, floor)); the gradient is zero where the floor is active.
  Tensor log(const Tensor& a, Real floor = 0.0);
  Tensor sum(const Tensor& a);
  Tensor mean(const Tensor& a);
  Tensor embedding(const Tensor& table, std::span<const int> ids);
  Tensor embedding_bag(const Tensor& table, std::shared_ptr<const Bags> bags);

  // Generic dispatch for ops that take no extra arguments (concat joins on
  // the last axis). Ops that need arguments throw UsageError here.
  Tensor apply(OpKind kind, std::span<const Tensor> inputs);

  // Writes d(loss)/d(x) into every recorded tensor that requires grad,
  // accumulating into leaf gradient buffers.
  void backward(const Tensor& loss);

  // Drops every recorded op and the references it holds.
  void clear();
  std::size_t size() const noexcept;
  bool consumed() const noexcept { return consumed_; }

 private:
  struct Entry;

  Tensor finish(OpKind kind, std::vector<std::shared_ptr<detail::Node>> inputs, Shape shape,
                std::vector<Real> value, Entry* extra);
  void check_inputs(OpKind kind, std::span<const Tensor> inputs) const;

  bool record_;
  bool checked_;
  bool consumed_ = false;
  std::vector<Entry> entries_;
};

}  // namespace sememe::nd
