#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sememe/nd/params.hpp"

namespace sememe::nd {

struct AdamConfig {
  Real learning_rate = 1e-3;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real epsilon = 1e-8;
};

/// Moment buffers and step counter for one ParamSet.
///
/// Buffers are created lazily (zero-filled) the first time a parameter is
/// updated, keyed by parameter name.
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::unordered_map<std::string, std::vector<Real>> first_moment;
  std::unordered_map<std::string, std::vector<Real>> second_moment;

  AdamState() = default;
  explicit AdamState(AdamConfig cfg) : config(cfg) {}
};

// One bias-corrected Adam update of every parameter, then zeroes the
// gradients. Throws if any parameter has no gradient buffer.
void adam_step(ParamSet& params, AdamState& state);

}  // namespace sememe::nd
