#include "sememe/loss/sequence_loss.hpp"

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::loss {

LossMode parse_loss_mode(const std::string& text) {
  if (text == "soft") return LossMode::kSoft;
  if (text == "hard") return LossMode::kHard;
  throw UsageError(fmt::format("unknown loss mode '{}' (expected soft or hard)", text));
}

std::string loss_mode_name(LossMode mode) { return mode == LossMode::kSoft ? "soft" : "hard"; }

const TargetProjection& projection_for(LossMode mode) {
  static const SoftProjection soft;
  static const HardProjection hard;
  if (mode == LossMode::kSoft) return soft;
  return hard;
}

nd::Tensor sequence_loss(nd::Tape& tape, std::span<const nd::Tensor> step_probs, std::span<const int> gold,
                         const LabelBag& bag, const TargetProjection& projection) {
  if (step_probs.size() != gold.size()) {
    throw UsageError(fmt::format("{} step distributions for a gold sequence of length {}", step_probs.size(),
                                 gold.size()));
  }
  if (gold.empty()) throw UsageError("empty gold sequence");
  const std::size_t steps = gold.size();
  const std::size_t vocab = bag.vocab_size();
  std::vector<Real> targets;
  targets.reserve(steps * vocab);
  for (std::size_t t = 0; t < steps; ++t) {
    const auto& p = step_probs[t];
    if (p.size() != vocab) {
      throw ShapeError(fmt::format("step {} distribution has shape {}, label vocab has {} entries", t,
                                       nd::to_string(p.shape()), vocab));
    }
    const auto y = projection.project(gold[t], bag);
    targets.insert(targets.end(), y.begin(), y.end());
  }
  const nd::Tensor probs = steps == 1 ? step_probs[0] : tape.concat(step_probs, 0);
  const nd::Tensor logp = tape.log(probs, kLogFloor);
  const nd::Tensor target = nd::Tensor::from(logp.shape(), std::move(targets));
  return tape.scale(tape.sum(tape.mul(logp, target)), -1.0);
}

nd::Tensor sequence_loss(nd::Tape& tape, std::span<const nd::Tensor> step_probs, std::span<const int> gold,
                         const LabelBag& bag, LossMode mode) {
  return sequence_loss(tape, step_probs, gold, bag, projection_for(mode));
}

}  // namespace sememe::loss
