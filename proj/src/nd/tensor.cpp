#include "sememe/nd/tensor.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::nd {

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

namespace {

void validate_shape(const Shape& shape) {
  for (auto d : shape) {
    if (d == 0) throw ShapeError(fmt::format("tensor shape {} has a zero dimension", to_string(shape)));
  }
}

}  // namespace

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, Real value, bool requires_grad) {
  validate_shape(shape);
  auto node = std::make_shared<detail::Node>();
  node->value.assign(numel(shape), value);
  node->shape = std::move(shape);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::from(Shape shape, std::vector<Real> values, bool requires_grad) {
  validate_shape(shape);
  if (numel(shape) != values.size()) {
    throw ShapeError(fmt::format("tensor shape {} needs {} values, got {}", to_string(shape), numel(shape),
                                 values.size()));
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(Real value, bool requires_grad) { return from({}, {value}, requires_grad); }

Tensor Tensor::row(std::initializer_list<Real> values, bool requires_grad) {
  return from({1, values.size()}, std::vector<Real>(values), requires_grad);
}

const detail::Node& Tensor::node() const {
  if (!node_) throw Error("use of an undefined tensor");
  return *node_;
}

detail::Node& Tensor::node() {
  if (!node_) throw Error("use of an undefined tensor");
  return *node_;
}

const Shape& Tensor::shape() const { return node().shape; }

std::size_t Tensor::dim(std::size_t axis) const {
  const auto& s = shape();
  if (axis >= s.size()) {
    throw ShapeError(fmt::format("axis {} out of range for shape {}", axis, to_string(s)));
  }
  return s[axis];
}

std::size_t Tensor::size() const { return node().value.size(); }

std::span<const Real> Tensor::values() const { return node().value; }
std::span<Real> Tensor::values_mut() { return node().value; }

Real Tensor::item() const {
  if (size() != 1) throw ShapeError(fmt::format("item() on non-scalar tensor {}", to_string(shape())));
  return node().value[0];
}

Real Tensor::at(std::size_t row, std::size_t col) const {
  const auto& s = shape();
  if (s.size() != 2) throw ShapeError(fmt::format("2-d index into tensor {}", to_string(s)));
  return node().value[row * s[1] + col];
}

bool Tensor::requires_grad() const { return node().requires_grad; }
void Tensor::set_requires_grad(bool flag) { node().requires_grad = flag; }
bool Tensor::has_grad() const { return !node().grad.empty(); }

std::span<const Real> Tensor::grad() const {
  if (!has_grad()) throw Error("tensor has no gradient buffer");
  return node().grad;
}

std::span<Real> Tensor::grad_mut() {
  if (!has_grad()) throw Error("tensor has no gradient buffer");
  return node().grad;
}

void Tensor::zero_grad() { node().grad.assign(node().value.size(), 0.0); }
void Tensor::clear_grad() {
  node().grad.clear();
  node().grad.shrink_to_fit();
}

Tensor Tensor::clone() const { return from(shape(), node().value, requires_grad()); }
Tensor Tensor::detach() const { return from(shape(), node().value, false); }

bool Tensor::all_finite() const {
  const auto& v = node().value;
  return std::all_of(v.begin(), v.end(), [](Real x) { return std::isfinite(x); });
}

}  // namespace sememe::nd
