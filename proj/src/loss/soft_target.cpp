#include "sememe/loss/soft_target.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::loss {

LabelBag::LabelBag(std::span<const int> labels, std::size_t vocab_size)
    : labels_(labels.begin(), labels.end()), vocab_size_(vocab_size) {
  if (labels_.empty()) throw UsageError("label bag is empty");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int id = labels_[i];
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
      throw UsageError(fmt::format("label id {} out of range for vocab of size {}", id, vocab_size));
    }
    if (id == kEosId) throw UsageError("EOS cannot be part of a label bag");
    if (std::find(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(i), id) !=
        labels_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw UsageError(fmt::format("label id {} appears twice in a label bag", id));
    }
  }
}

bool LabelBag::contains(int id) const { return std::find(labels_.begin(), labels_.end(), id) != labels_.end(); }

std::vector<Real> LabelBag::indicator() const {
  std::vector<Real> q(vocab_size_, 0.0);
  for (int id : labels_) q[static_cast<std::size_t>(id)] = 1.0;
  return q;
}

namespace {

void check_gold(int gold, const LabelBag& bag) {
  if (gold < 0 || static_cast<std::size_t>(gold) >= bag.vocab_size()) {
    throw UsageError(fmt::format("gold id {} out of range for vocab of size {}", gold, bag.vocab_size()));
  }
}

}  // namespace

std::vector<Real> HardProjection::project(int gold, const LabelBag& bag) const {
  check_gold(gold, bag);
  std::vector<Real> y(bag.vocab_size(), 0.0);
  y[static_cast<std::size_t>(gold)] = 1.0;
  return y;
}

std::vector<Real> SoftProjection::project(int gold, const LabelBag& bag) const {
  check_gold(gold, bag);
  const Real share = 0.5 / static_cast<Real>(bag.size());
  std::vector<Real> y(bag.vocab_size(), 0.0);
  for (int id : bag.labels()) y[static_cast<std::size_t>(id)] = share;
  y[static_cast<std::size_t>(gold)] += 0.5;
  return y;
}

std::vector<Real> soft_target(std::span<const Real> y_t, const LabelBag& bag) {
  if (y_t.size() != bag.vocab_size()) {
    throw UsageError(fmt::format("target has {} entries, label vocab has {}", y_t.size(), bag.vocab_size()));
  }
  std::size_t ones = 0;
  int gold = -1;
  for (std::size_t i = 0; i < y_t.size(); ++i) {
    if (y_t[i] == 1.0) {
      ++ones;
      gold = static_cast<int>(i);
    } else if (y_t[i] != 0.0) {
      ones = 2;
      break;
    }
  }
  if (ones != 1) throw UsageError("step target is not one-hot");
  return SoftProjection{}.project(gold, bag);
}

}  // namespace sememe::loss
