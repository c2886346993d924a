#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "sememe/nd/params.hpp"
#include "sememe/nd/tape.hpp"

namespace sememe::nd {

struct GradCheckOptions {
  Real epsilon = 1e-5;
  // Coordinates sampled per parameter; 0 checks every coordinate.
  std::size_t max_coords_per_param = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  Real max_rel_error = 0;
  std::string worst_param;
  std::size_t worst_index = 0;
  Real worst_analytic = 0;
  Real worst_numeric = 0;
  std::size_t coords_checked = 0;
};

using LossFn = std::function<Tensor(Tape&)>;

/// Compares backward() against central differences.
///
/// `loss` builds a scalar on the tape it is given; it is evaluated once on a
/// recording tape for the analytic gradient and then on non-recording tapes
/// with each sampled coordinate nudged by +-epsilon. The error per coordinate
/// is |analytic - numeric| / max(1, |analytic|, |numeric|); the maximum is
/// returned. Parameter values are restored afterwards.
GradCheckResult grad_check(const LossFn& loss, ParamSet& params, const GradCheckOptions& options = {});

}  // namespace sememe::nd
