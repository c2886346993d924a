#include "sememe/nd/tape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include <fmt/format.h>

#include "kernels.hpp"
#include "sememe/common/error.hpp"

namespace sememe::nd {

namespace {

std::atomic<bool> g_default_checked{false};

using NodePtr = std::shared_ptr<detail::Node>;

enum class Broadcast { kSame, kRow, kScalar };

Broadcast broadcast_mode(OpKind kind, const Shape& a, const Shape& b) {
  if (a == b) return Broadcast::kSame;
  if (numel(b) == 1) return Broadcast::kScalar;
  if (a.size() == 2 && b.size() == 2 && b[0] == 1 && b[1] == a[1]) return Broadcast::kRow;
  throw ShapeError(fmt::format("{}: incompatible shapes {} and {}", op_name(kind), to_string(a), to_string(b)));
}

Real* grad_of(detail::Node& node) {
  if (node.grad.empty()) node.grad.assign(node.value.size(), 0.0);
  return node.grad.data();
}

bool all_finite(const std::vector<Real>& v) {
  return std::all_of(v.begin(), v.end(), [](Real x) { return std::isfinite(x); });
}

}  // namespace

struct Tape::Entry {
  OpKind kind{};
  std::vector<NodePtr> inputs;
  NodePtr output;
  Broadcast broadcast = Broadcast::kSame;
  std::size_t axis = 0;
  std::size_t start = 0;
  Real constant = 0;
  std::vector<int> ids;
  std::shared_ptr<const Bags> bags;
};

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kMatMul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kLog: return "log";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kEmbedding: return "embedding";
    case OpKind::kEmbeddingBag: return "embedding_bag";
  }
  return "unknown";
}

void set_default_checked(bool checked) noexcept { g_default_checked.store(checked); }
bool default_checked() noexcept { return g_default_checked.load(); }

Tape::Tape(bool record) : record_(record), checked_(default_checked()) {}
Tape::~Tape() = default;
Tape::Tape(Tape&&) noexcept = default;
Tape& Tape::operator=(Tape&&) noexcept = default;

std::size_t Tape::size() const noexcept { return entries_.size(); }

void Tape::clear() {
  entries_.clear();
  entries_.shrink_to_fit();
  consumed_ = false;
}

void Tape::check_inputs(OpKind kind, std::span<const Tensor> inputs) const {
  for (const auto& t : inputs) {
    if (!t.defined()) throw Error(fmt::format("{}: undefined input tensor", op_name(kind)));
    if (checked_ && !all_finite(t.node_->value)) {
      throw NumericError(fmt::format("{}: non-finite value in input of shape {}", op_name(kind),
                                     to_string(t.shape())));
    }
  }
}

Tensor Tape::finish(OpKind kind, std::vector<NodePtr> inputs, Shape shape, std::vector<Real> value,
                    Entry* extra) {
  if (checked_ && !all_finite(value)) {
    throw NumericError(fmt::format("{}: produced a non-finite value (output shape {})", op_name(kind),
                                   to_string(shape)));
  }
  auto out = std::make_shared<detail::Node>();
  out->shape = std::move(shape);
  out->value = std::move(value);
  const bool needs_grad =
      record_ && std::any_of(inputs.begin(), inputs.end(), [](const NodePtr& n) { return n->requires_grad; });
  if (needs_grad) {
    out->requires_grad = true;
    Entry entry;
    if (extra != nullptr) entry = std::move(*extra);
    entry.kind = kind;
    entry.inputs = std::move(inputs);
    entry.output = out;
    entries_.push_back(std::move(entry));
  }
  return Tensor(std::move(out));
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  const Tensor in[] = {a, b};
  check_inputs(OpKind::kMatMul, in);
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  if (sa.size() != 2 || sb.size() != 2 || sa[1] != sb[0]) {
    throw ShapeError(fmt::format("matmul: incompatible shapes {} and {}", to_string(sa), to_string(sb)));
  }
  const std::size_t m = sa[0], k = sa[1], n = sb[1];
  std::vector<Real> out(m * n);
  kernels::matmul(a.node_->value.data(), b.node_->value.data(), out.data(), m, k, n);
  return finish(OpKind::kMatMul, {a.node_, b.node_}, {m, n}, std::move(out), nullptr);
}

namespace {

template <typename Fn>
std::vector<Real> elementwise(const detail::Node& a, const detail::Node& b, Broadcast mode, Fn fn) {
  std::vector<Real> out(a.value.size());
  const std::size_t cols = mode == Broadcast::kRow ? a.shape[1] : 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Real bv = mode == Broadcast::kSame ? b.value[i] : mode == Broadcast::kRow ? b.value[i % cols] : b.value[0];
    out[i] = fn(a.value[i], bv);
  }
  return out;
}

}  // namespace

Tensor Tape::add(const Tensor& a, const Tensor& b) {
  const Tensor in[] = {a, b};
  check_inputs(OpKind::kAdd, in);
  Entry extra;
  extra.broadcast = broadcast_mode(OpKind::kAdd, a.shape(), b.shape());
  auto out = elementwise(*a.node_, *b.node_, extra.broadcast, [](Real x, Real y) { return x + y; });
  return finish(OpKind::kAdd, {a.node_, b.node_}, a.shape(), std::move(out), &extra);
}

Tensor Tape::sub(const Tensor& a, const Tensor& b) {
  const Tensor in[] = {a, b};
  check_inputs(OpKind::kSub, in);
  Entry extra;
  extra.broadcast = broadcast_mode(OpKind::kSub, a.shape(), b.shape());
  auto out = elementwise(*a.node_, *b.node_, extra.broadcast, [](Real x, Real y) { return x - y; });
  return finish(OpKind::kSub, {a.node_, b.node_}, a.shape(), std::move(out), &extra);
}

Tensor Tape::mul(const Tensor& a, const Tensor& b) {
  const Tensor in[] = {a, b};
  check_inputs(OpKind::kMul, in);
  Entry extra;
  extra.broadcast = broadcast_mode(OpKind::kMul, a.shape(), b.shape());
  auto out = elementwise(*a.node_, *b.node_, extra.broadcast, [](Real x, Real y) { return x * y; });
  return finish(OpKind::kMul, {a.node_, b.node_}, a.shape(), std::move(out), &extra);
}

Tensor Tape::scale(const Tensor& a, Real factor) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kScale, in);
  std::vector<Real> out(a.size());
  const auto& v = a.node_->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] * factor;
  Entry extra;
  extra.constant = factor;
  return finish(OpKind::kScale, {a.node_}, a.shape(), std::move(out), &extra);
}

namespace {

// Splits a shape around `axis` into (outer, axis extent, inner) strides.
struct AxisView {
  std::size_t outer = 1;
  std::size_t extent = 1;
  std::size_t inner = 1;
};

AxisView axis_view(const Shape& s, std::size_t axis) {
  AxisView v;
  for (std::size_t i = 0; i < axis; ++i) v.outer *= s[i];
  v.extent = s[axis];
  for (std::size_t i = axis + 1; i < s.size(); ++i) v.inner *= s[i];
  return v;
}

}  // namespace

Tensor Tape::concat(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  check_inputs(OpKind::kConcat, parts);
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) {
    throw ShapeError(fmt::format("concat: axis {} out of range for shape {}", axis, to_string(first)));
  }
  Shape shape = first;
  shape[axis] = 0;
  for (const auto& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t i = 0; ok && i < s.size(); ++i) ok = (i == axis) || s[i] == first[i];
    if (!ok) {
      throw ShapeError(
          fmt::format("concat: incompatible shapes {} and {} on axis {}", to_string(first), to_string(s), axis));
    }
    shape[axis] += s[axis];
  }
  const auto view = axis_view(shape, axis);
  std::vector<Real> out(numel(shape));
  std::vector<NodePtr> inputs;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const std::size_t ext = p.shape()[axis];
    const auto& v = p.node_->value;
    for (std::size_t o = 0; o < view.outer; ++o) {
      std::copy_n(v.begin() + o * ext * view.inner, ext * view.inner,
                  out.begin() + (o * view.extent + offset) * view.inner);
    }
    offset += ext;
    inputs.push_back(p.node_);
  }
  Entry extra;
  extra.axis = axis;
  return finish(OpKind::kConcat, std::move(inputs), std::move(shape), std::move(out), &extra);
}

Tensor Tape::slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kSlice, in);
  const Shape& sa = a.shape();
  if (axis >= sa.size() || length == 0 || start + length > sa[axis]) {
    throw ShapeError(fmt::format("slice: range [{}, {}) on axis {} invalid for shape {}", start, start + length,
                                 axis, to_string(sa)));
  }
  Shape shape = sa;
  shape[axis] = length;
  const auto view = axis_view(sa, axis);
  std::vector<Real> out(numel(shape));
  const auto& v = a.node_->value;
  for (std::size_t o = 0; o < view.outer; ++o) {
    std::copy_n(v.begin() + (o * view.extent + start) * view.inner, length * view.inner,
                out.begin() + o * length * view.inner);
  }
  Entry extra;
  extra.axis = axis;
  extra.start = start;
  return finish(OpKind::kSlice, {a.node_}, std::move(shape), std::move(out), &extra);
}

Tensor Tape::transpose(const Tensor& a) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kTranspose, in);
  const Shape& sa = a.shape();
  if (sa.size() != 2) throw ShapeError(fmt::format("transpose: expected a 2-d tensor, got {}", to_string(sa)));
  const std::size_t r = sa[0], c = sa[1];
  std::vector<Real> out(r * c);
  const auto& v = a.node_->value;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = v[i * c + j];
  return finish(OpKind::kTranspose, {a.node_}, {c, r}, std::move(out), nullptr);
}

Tensor Tape::tanh(const Tensor& a) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kTanh, in);
  std::vector<Real> out(a.size());
  const auto& v = a.node_->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(v[i]);
  return finish(OpKind::kTanh, {a.node_}, a.shape(), std::move(out), nullptr);
}

Tensor Tape::sigmoid(const Tensor& a) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kSigmoid, in);
  std::vector<Real> out(a.size());
  const auto& v = a.node_->value;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Real x = v[i];
    if (x >= 0) {
      out[i] = 1.0 / (1.0 + std::exp(-x));
    } else {
      const Real e = std::exp(x);
      out[i] = e / (1.0 + e);
    }
  }
  return finish(OpKind::kSigmoid, {a.node_}, a.shape(), std::move(out), nullptr);
}

Tensor Tape::softmax(const Tensor& a) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kSoftmax, in);
  const Shape& sa = a.shape();
  const std::size_t cols = sa.empty() ? 1 : sa.back();
  const std::size_t rows = a.size() / cols;
  std::vector<Real> out(a.size());
  const auto& v = a.node_->value;
  for (std::size_t r = 0; r < rows; ++r) {
    const Real* x = v.data() + r * cols;
    Real* y = out.data() + r * cols;
    const Real mx = *std::max_element(x, x + cols);
    Real total = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      y[j] = std::exp(x[j] - mx);
      total += y[j];
    }
    for (std::size_t j = 0; j < cols; ++j) y[j] /= total;
  }
  return finish(OpKind::kSoftmax, {a.node_}, sa, std::move(out), nullptr);
}

Tensor Tape::log(const Tensor& a, Real floor) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kLog, in);
  std::vector<Real> out(a.size());
  const auto& v = a.node_->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(std::max(v[i], floor));
  Entry extra;
  extra.constant = floor;
  return finish(OpKind::kLog, {a.node_}, a.shape(), std::move(out), &extra);
}

Tensor Tape::sum(const Tensor& a) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kSum, in);
  Real total = 0;
  for (Real x : a.node_->value) total += x;
  return finish(OpKind::kSum, {a.node_}, {}, {total}, nullptr);
}

Tensor Tape::mean(const Tensor& a) {
  const Tensor in[] = {a};
  check_inputs(OpKind::kMean, in);
  Real total = 0;
  for (Real x : a.node_->value) total += x;
  return finish(OpKind::kMean, {a.node_}, {}, {total / static_cast<Real>(a.size())}, nullptr);
}

Tensor Tape::embedding(const Tensor& table, std::span<const int> ids) {
  const Tensor in[] = {table};
  check_inputs(OpKind::kEmbedding, in);
  const Shape& st = table.shape();
  if (st.size() != 2) throw ShapeError(fmt::format("embedding: table must be 2-d, got {}", to_string(st)));
  if (ids.empty()) throw ShapeError("embedding: empty id list");
  const std::size_t dim = st[1];
  std::vector<Real> out(ids.size() * dim);
  const auto& v = table.node_->value;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || static_cast<std::size_t>(ids[r]) >= st[0]) {
      throw ShapeError(fmt::format("embedding: id {} out of range for table {}", ids[r], to_string(st)));
    }
    std::copy_n(v.begin() + static_cast<std::size_t>(ids[r]) * dim, dim, out.begin() + r * dim);
  }
  Entry extra;
  extra.ids.assign(ids.begin(), ids.end());
  return finish(OpKind::kEmbedding, {table.node_}, {ids.size(), dim}, std::move(out), &extra);
}

Tensor Tape::embedding_bag(const Tensor& table, std::shared_ptr<const Bags> bags) {
  const Tensor in[] = {table};
  check_inputs(OpKind::kEmbeddingBag, in);
  const Shape& st = table.shape();
  if (st.size() != 2) throw ShapeError(fmt::format("embedding_bag: table must be 2-d, got {}", to_string(st)));
  if (!bags || bags->empty()) throw ShapeError("embedding_bag: no bags");
  const std::size_t dim = st[1];
  std::vector<Real> out(bags->size() * dim, 0.0);
  const auto& v = table.node_->value;
  for (std::size_t r = 0; r < bags->size(); ++r) {
    for (const auto& item : (*bags)[r]) {
      if (item.index >= st[0]) {
        throw ShapeError(fmt::format("embedding_bag: index {} out of range for table {}", item.index, to_string(st)));
      }
      kernels::axpy(item.weight, v.data() + item.index * dim, out.data() + r * dim, dim);
    }
  }
  Entry extra;
  const std::size_t rows = bags->size();
  extra.bags = std::move(bags);
  return finish(OpKind::kEmbeddingBag, {table.node_}, {rows, dim}, std::move(out), &extra);
}

Tensor Tape::apply(OpKind kind, std::span<const Tensor> inputs) {
  auto need = [&](std::size_t n) {
    if (inputs.size() != n) {
      throw UsageError(fmt::format("{}: expected {} inputs, got {}", op_name(kind), n, inputs.size()));
    }
  };
  switch (kind) {
    case OpKind::kMatMul: need(2); return matmul(inputs[0], inputs[1]);
    case OpKind::kAdd: need(2); return add(inputs[0], inputs[1]);
    case OpKind::kSub: need(2); return sub(inputs[0], inputs[1]);
    case OpKind::kMul: need(2); return mul(inputs[0], inputs[1]);
    case OpKind::kConcat:
      if (inputs.empty()) throw UsageError("concat: expected at least one input");
      return concat(inputs, inputs[0].rank() - 1);
    case OpKind::kTranspose: need(1); return transpose(inputs[0]);
    case OpKind::kTanh: need(1); return tanh(inputs[0]);
    case OpKind::kSigmoid: need(1); return sigmoid(inputs[0]);
    case OpKind::kSoftmax: need(1); return softmax(inputs[0]);
    case OpKind::kLog: need(1); return log(inputs[0]);
    case OpKind::kSum: need(1); return sum(inputs[0]);
    case OpKind::kMean: need(1); return mean(inputs[0]);
    default: break;
  }
  throw UsageError(fmt::format("{}: needs arguments beyond its inputs; call it directly", op_name(kind)));
}

namespace {

// Adds g (shaped like the broadcast output) into the gradient of operand b.
void reduce_into(Broadcast mode, const std::vector<Real>& g, std::size_t cols, Real sign, Real* gb,
                 const std::vector<Real>* factor) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Real contrib = sign * g[i] * (factor ? (*factor)[i] : 1.0);
    switch (mode) {
      case Broadcast::kSame: gb[i] += contrib; break;
      case Broadcast::kRow: gb[i % cols] += contrib; break;
      case Broadcast::kScalar: gb[0] += contrib; break;
    }
  }
}

}  // namespace

void Tape::backward(const Tensor& loss) {
  if (consumed_) throw Error("backward called twice on the same tape");
  if (!loss.defined() || loss.size() != 1) {
    throw ShapeError(fmt::format("backward needs a scalar loss, got shape {}",
                                 loss.defined() ? to_string(loss.shape()) : std::string("<undefined>")));
  }
  if (entries_.empty()) throw Error("backward on an empty tape");
  if (!loss.requires_grad()) throw Error("backward: loss does not depend on any tensor that requires grad");
  consumed_ = true;

  grad_of(*loss.node_)[0] += 1.0;

  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    Entry& e = *it;
    detail::Node& out = *e.output;
    if (out.grad.empty()) continue;
    const std::vector<Real>& g = out.grad;
    auto wants = [&](std::size_t i) { return e.inputs[i]->requires_grad; };

    switch (e.kind) {
      case OpKind::kMatMul: {
        detail::Node& a = *e.inputs[0];
        detail::Node& b = *e.inputs[1];
        const std::size_t m = a.shape[0], k = a.shape[1], n = b.shape[1];
        if (wants(0)) kernels::matmul_grad_a(g.data(), b.value.data(), grad_of(a), m, k, n);
        if (wants(1)) kernels::matmul_grad_b(a.value.data(), g.data(), grad_of(b), m, k, n);
        break;
      }
      case OpKind::kAdd:
      case OpKind::kSub: {
        detail::Node& a = *e.inputs[0];
        detail::Node& b = *e.inputs[1];
        if (wants(0)) kernels::axpy(1.0, g.data(), grad_of(a), g.size());
        if (wants(1)) {
          const std::size_t cols = a.shape.size() == 2 ? a.shape[1] : 1;
          reduce_into(e.broadcast, g, cols, e.kind == OpKind::kAdd ? 1.0 : -1.0, grad_of(b), nullptr);
        }
        break;
      }
      case OpKind::kMul: {
        detail::Node& a = *e.inputs[0];
        detail::Node& b = *e.inputs[1];
        const std::size_t cols = a.shape.size() == 2 ? a.shape[1] : 1;
        if (wants(0)) {
          Real* ga = grad_of(a);
          for (std::size_t i = 0; i < g.size(); ++i) {
            const Real bv = e.broadcast == Broadcast::kSame  ? b.value[i]
                            : e.broadcast == Broadcast::kRow ? b.value[i % cols]
                                                             : b.value[0];
            ga[i] += g[i] * bv;
          }
        }
        if (wants(1)) reduce_into(e.broadcast, g, cols, 1.0, grad_of(b), &a.value);
        break;
      }
      case OpKind::kScale: {
        if (wants(0)) kernels::axpy(e.constant, g.data(), grad_of(*e.inputs[0]), g.size());
        break;
      }
      case OpKind::kConcat: {
        const auto view = axis_view(out.shape, e.axis);
        std::size_t offset = 0;
        for (std::size_t p = 0; p < e.inputs.size(); ++p) {
          detail::Node& in = *e.inputs[p];
          const std::size_t ext = in.shape[e.axis];
          if (in.requires_grad) {
            Real* gi = grad_of(in);
            for (std::size_t o = 0; o < view.outer; ++o) {
              kernels::axpy(1.0, g.data() + (o * view.extent + offset) * view.inner, gi + o * ext * view.inner,
                            ext * view.inner);
            }
          }
          offset += ext;
        }
        break;
      }
      case OpKind::kSlice: {
        detail::Node& a = *e.inputs[0];
        if (!wants(0)) break;
        const auto view = axis_view(a.shape, e.axis);
        const std::size_t len = out.shape[e.axis];
        Real* ga = grad_of(a);
        for (std::size_t o = 0; o < view.outer; ++o) {
          kernels::axpy(1.0, g.data() + o * len * view.inner, ga + (o * view.extent + e.start) * view.inner,
                        len * view.inner);
        }
        break;
      }
      case OpKind::kTranspose: {
        detail::Node& a = *e.inputs[0];
        if (!wants(0)) break;
        const std::size_t r = a.shape[0], c = a.shape[1];
        Real* ga = grad_of(a);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += g[j * r + i];
        break;
      }
      case OpKind::kTanh: {
        if (!wants(0)) break;
        Real* ga = grad_of(*e.inputs[0]);
        const auto& y = out.value;
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case OpKind::kSigmoid: {
        if (!wants(0)) break;
        Real* ga = grad_of(*e.inputs[0]);
        const auto& y = out.value;
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case OpKind::kSoftmax: {
        if (!wants(0)) break;
        Real* ga = grad_of(*e.inputs[0]);
        const auto& y = out.value;
        const std::size_t cols = out.shape.empty() ? 1 : out.shape.back();
        for (std::size_t r = 0; r < y.size() / cols; ++r) {
          const Real* yr = y.data() + r * cols;
          const Real* gr = g.data() + r * cols;
          const Real inner = kernels::dot(gr, yr, cols);
          for (std::size_t j = 0; j < cols; ++j) ga[r * cols + j] += yr[j] * (gr[j] - inner);
        }
        break;
      }
      case OpKind::kLog: {
        detail::Node& a = *e.inputs[0];
        if (!wants(0)) break;
        Real* ga = grad_of(a);
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (a.value[i] > e.constant) ga[i] += g[i] / a.value[i];
        }
        break;
      }
      case OpKind::kSum:
      case OpKind::kMean: {
        detail::Node& a = *e.inputs[0];
        if (!wants(0)) break;
        const Real d = e.kind == OpKind::kSum ? g[0] : g[0] / static_cast<Real>(a.value.size());
        Real* ga = grad_of(a);
        for (std::size_t i = 0; i < a.value.size(); ++i) ga[i] += d;
        break;
      }
      case OpKind::kEmbedding: {
        detail::Node& table = *e.inputs[0];
        if (!wants(0)) break;
        const std::size_t dim = table.shape[1];
        Real* gt = grad_of(table);
        for (std::size_t r = 0; r < e.ids.size(); ++r) {
          kernels::axpy(1.0, g.data() + r * dim, gt + static_cast<std::size_t>(e.ids[r]) * dim, dim);
        }
        break;
      }
      case OpKind::kEmbeddingBag: {
        detail::Node& table = *e.inputs[0];
        if (!wants(0)) break;
        const std::size_t dim = table.shape[1];
        Real* gt = grad_of(table);
        for (std::size_t r = 0; r < e.bags->size(); ++r) {
          for (const auto& item : (*e.bags)[r]) {
            kernels::axpy(item.weight, g.data() + r * dim, gt + item.index * dim, dim);
          }
        }
        break;
      }
    }
  }
}

}  // namespace sememe::nd
