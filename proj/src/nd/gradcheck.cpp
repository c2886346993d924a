#include "sememe/nd/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::nd {

namespace {

Real evaluate(const LossFn& loss) {
  Tape tape(false);
  return loss(tape).item();
}

}  // namespace

GradCheckResult grad_check(const LossFn& loss, ParamSet& params, const GradCheckOptions& options) {
  if (!(options.epsilon >= 1e-7 && options.epsilon <= 1e-4)) {
    throw UsageError(fmt::format("grad_check: epsilon {} outside [1e-7, 1e-4]", options.epsilon));
  }

  params.zero_grad();
  {
    Tape tape;
    Tensor value = loss(tape);
    if (value.requires_grad()) tape.backward(value);
  }

  Rng rng(options.seed);
  GradCheckResult result;
  for (auto& [name, tensor] : params) {
    std::vector<std::size_t> coords(tensor.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (options.max_coords_per_param != 0 && coords.size() > options.max_coords_per_param) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(options.max_coords_per_param);
      std::sort(coords.begin(), coords.end());
    }
    auto values = tensor.values_mut();
    const auto grad = tensor.grad();
    for (std::size_t idx : coords) {
      const Real original = values[idx];
      values[idx] = original + options.epsilon;
      const Real plus = evaluate(loss);
      values[idx] = original - options.epsilon;
      const Real minus = evaluate(loss);
      values[idx] = original;

      const Real numeric = (plus - minus) / (2.0 * options.epsilon);
      if (!std::isfinite(numeric)) {
        throw NumericError(fmt::format("grad_check: non-finite numeric gradient for {}[{}]", name, idx));
      }
      const Real analytic = grad[idx];
      const Real denom = std::max({Real{1}, std::abs(analytic), std::abs(numeric)});
      const Real rel = std::abs(analytic - numeric) / denom;
      ++result.coords_checked;
      if (result.coords_checked == 1 || rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_param = name;
        result.worst_index = idx;
        result.worst_analytic = analytic;
        result.worst_numeric = numeric;
      }
    }
  }
  params.zero_grad();
  return result;
}

}  // namespace sememe::nd
