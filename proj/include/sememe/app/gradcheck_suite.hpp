#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sememe/nd/gradcheck.hpp"

namespace sememe::app {

struct GradCheckEntry {
  std::string name;
  nd::GradCheckResult result;
  bool passed = false;
};

struct GradCheckSuiteOptions {
  double tolerance = 1e-4;
  double epsilon = 1e-5;
  std::uint64_t seed = 7;
  std::size_t trials_per_op = 5;  // random inputs per primitive
};

/// Central-difference checks of every primitive op, the sequence loss in
/// both modes, the per-label binary cross entropy, and the full training
/// loss of each neural model on a two-example batch.
std::vector<GradCheckEntry> run_gradcheck_suite(const GradCheckSuiteOptions& options);

}  // namespace sememe::app
