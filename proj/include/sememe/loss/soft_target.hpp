#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "sememe/nd/tensor.hpp"

namespace sememe::loss {

using nd::Real;

// Reserved label ids shared with the label vocab.
inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kEosId = 2;

/// The gold labels of one example as an unordered bag over the label vocab.
/// EOS never belongs to the bag, so M counts real labels only.
class LabelBag {
 public:
  // Throws UsageError on an empty list, duplicates, EOS, or ids out of range.
  LabelBag(std::span<const int> labels, std::size_t vocab_size);

  std::size_t size() const noexcept { return labels_.size(); }  // M
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  bool contains(int id) const;
  const std::vector<int>& labels() const noexcept { return labels_; }
  // q_s: 1 at every bag label, 0 elsewhere.
  std::vector<Real> indicator() const;

 private:
  std::vector<int> labels_;
  std::size_t vocab_size_;
};

/// Maps the gold label of one decoding step to a target distribution.
class TargetProjection {
 public:
  virtual ~TargetProjection() = default;
  virtual std::string_view name() const = 0;
  virtual std::vector<Real> project(int gold, const LabelBag& bag) const = 0;
};

// One-hot on the gold label (plain cross entropy).
class HardProjection final : public TargetProjection {
 public:
  std::string_view name() const override { return "hard"; }
  std::vector<Real> project(int gold, const LabelBag& bag) const override;
};

// Average of the one-hot gold target and the uniform distribution over the
// bag: (q_s / M + y_t) / 2.
class SoftProjection final : public TargetProjection {
 public:
  std::string_view name() const override { return "soft"; }
  std::vector<Real> project(int gold, const LabelBag& bag) const override;
};

// (q_s / M + y_t) / 2 for an explicit one-hot y_t; throws UsageError when
// y_t is not one-hot or its size differs from the bag's vocab.
std::vector<Real> soft_target(std::span<const Real> y_t, const LabelBag& bag);

}  // namespace sememe::loss
