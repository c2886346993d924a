#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sememe::nd {

using Real = double;
using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

namespace detail {

struct Node {
  Shape shape;
  std::vector<Real> value;
  std::vector<Real> grad;  // empty until the first accumulation or zero_grad()
  bool requires_grad = false;
};

}  // namespace detail

/// Handle to a dense row-major array that may take part in a gradient tape.
///
/// Copies share storage, so a parameter held by a ParamSet and the same
/// parameter captured by a Tape refer to one buffer. Use clone() for an
/// independent copy. A rank-0 shape `{}` is a scalar with one element.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, Real value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<Real> values, bool requires_grad = false);
  static Tensor scalar(Real value, bool requires_grad = false);
  static Tensor row(std::initializer_list<Real> values, bool requires_grad = false);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const;

  std::span<const Real> values() const;
  std::span<Real> values_mut();
  Real item() const;
  Real at(std::size_t i) const { return values()[i]; }
  Real at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  void set_requires_grad(bool flag);
  bool has_grad() const;
  std::span<const Real> grad() const;
  std::span<Real> grad_mut();
  // Allocates the gradient buffer if needed and fills it with zeros.
  void zero_grad();
  // Drops the gradient buffer entirely.
  void clear_grad();

  // Deep copy of values (and grad flag); the copy has no gradient buffer.
  Tensor clone() const;
  // Same values, no gradient tracking.
  Tensor detach() const;

  bool all_finite() const;
  bool same_node(const Tensor& other) const noexcept { return node_ == other.node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  const detail::Node& node() const;
  detail::Node& node();

  std::shared_ptr<detail::Node> node_;

  friend class Tape;
};

}  // namespace sememe::nd
