#include "sememe/nd/adam.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::nd {

void adam_step(ParamSet& params, AdamState& state) {
  for (const auto& [name, t] : params) {
    if (!t.has_grad()) throw Error(fmt::format("adam_step: parameter '{}' has no gradient", name));
  }
  ++state.step;
  const auto& cfg = state.config;
  const Real t = static_cast<Real>(state.step);
  const Real correction1 = 1.0 - std::pow(cfg.beta1, t);
  const Real correction2 = 1.0 - std::pow(cfg.beta2, t);

  for (auto& [name, tensor] : params) {
    auto values = tensor.values_mut();
    auto grad = tensor.grad_mut();
    auto& m = state.first_moment[name];
    auto& v = state.second_moment[name];
    if (m.empty()) {
      m.assign(values.size(), 0.0);
      v.assign(values.size(), 0.0);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Real g = grad[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      const Real m_hat = m[i] / correction1;
      const Real v_hat = v[i] / correction2;
      values[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
    std::fill(grad.begin(), grad.end(), 0.0);
  }
}

}  // namespace sememe::nd
