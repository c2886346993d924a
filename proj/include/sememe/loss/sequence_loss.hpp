#pragma once

#include <span>
#include <string>

#include "sememe/loss/soft_target.hpp"
#include "sememe/nd/tape.hpp"

namespace sememe::loss {

enum class LossMode { kSoft, kHard };

LossMode parse_loss_mode(const std::string& text);
std::string loss_mode_name(LossMode mode);
const TargetProjection& projection_for(LossMode mode);

// Lower bound applied to probabilities before the log.
inline constexpr Real kLogFloor = 1e-12;

/// -sum_t sum_i y'_t[i] * log(max(p_t[i], 1e-12)) for one sequence.
///
/// `step_probs[t]` is a [1, V] distribution and `gold` the target sequence
/// including the closing EOS; the two must have the same length.
nd::Tensor sequence_loss(nd::Tape& tape, std::span<const nd::Tensor> step_probs, std::span<const int> gold,
                         const LabelBag& bag, const TargetProjection& projection);
nd::Tensor sequence_loss(nd::Tape& tape, std::span<const nd::Tensor> step_probs, std::span<const int> gold,
                         const LabelBag& bag, LossMode mode);

}  // namespace sememe::loss
