#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sememe/nd/tensor.hpp"

namespace sememe::nd {

using Rng = std::mt19937_64;

// Default initializer bound for every learnable weight.
inline constexpr Real kInitBound = 0.08;

Tensor uniform(Shape shape, Real bound, Rng& rng, bool requires_grad = true);

/// Ordered, named collection of learnable tensors.
///
/// Iteration follows insertion order, which fixes the order of optimizer
/// updates and of checkpoint blobs.
class ParamSet {
 public:
  using Entry = std::pair<std::string, Tensor>;

  // Registers a tensor under a unique name and marks it requires_grad.
  Tensor& add(const std::string& name, Tensor tensor);

  bool contains(const std::string& name) const;
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t parameter_count() const;
  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void zero_grad();
  bool all_finite() const;

  // Deep copy with fresh storage.
  ParamSet clone() const;
  // Overwrites values from a set with identical names and shapes.
  void assign_values(const ParamSet& other);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace sememe::nd
