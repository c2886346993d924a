#include "sememe/nd/params.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::nd {

Tensor uniform(Shape shape, Real bound, Rng& rng, bool requires_grad) {
  std::uniform_real_distribution<Real> dist(-bound, bound);
  std::vector<Real> values(numel(shape));
  for (auto& v : values) v = dist(rng);
  return Tensor::from(std::move(shape), std::move(values), requires_grad);
}

Tensor& ParamSet::add(const std::string& name, Tensor tensor) {
  if (index_.count(name) != 0) throw Error(fmt::format("duplicate parameter name '{}'", name));
  tensor.set_requires_grad(true);
  index_.emplace(name, entries_.size());
  entries_.emplace_back(name, std::move(tensor));
  return entries_.back().second;
}

bool ParamSet::contains(const std::string& name) const { return index_.count(name) != 0; }

Tensor& ParamSet::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error(fmt::format("unknown parameter '{}'", name));
  return entries_[it->second].second;
}

const Tensor& ParamSet::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error(fmt::format("unknown parameter '{}'", name));
  return entries_[it->second].second;
}

std::size_t ParamSet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : entries_) n += t.size();
  return n;
}

void ParamSet::zero_grad() {
  for (auto& [name, t] : entries_) t.zero_grad();
}

bool ParamSet::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second.all_finite(); });
}

ParamSet ParamSet::clone() const {
  ParamSet copy;
  for (const auto& [name, t] : entries_) copy.add(name, t.clone());
  return copy;
}

void ParamSet::assign_values(const ParamSet& other) {
  if (other.size() != size()) throw Error("assign_values: parameter sets differ in size");
  for (auto& [name, t] : entries_) {
    const Tensor& src = other.get(name);
    if (src.shape() != t.shape()) {
      throw ShapeError(fmt::format("assign_values: '{}' has shape {} but source has {}", name, to_string(t.shape()),
                                   to_string(src.shape())));
    }
    std::copy(src.values().begin(), src.values().end(), t.values_mut().begin());
  }
}

}  // namespace sememe::nd
