#include "resgcn/adam.hpp"

#include <cmath>

#include "resgcn/error.hpp"

namespace resgcn::nn {

void adam_step(std::span<const ParamSlot> params, AdamState& state, const AdamConfig& config) {
  if (state.moments.empty()) {
    state.moments.reserve(params.size());
    for (const auto& p : params) {
      state.moments.push_back(
          {Tensor2(p.value->rows(), p.value->cols()), Tensor2(p.value->rows(), p.value->cols())});
    }
  }
  if (state.moments.size() != params.size()) {
    fail(ErrorCode::kState, "adam_step: state tracks " + std::to_string(state.moments.size()) +
                                " tensors, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    require_same_shape(*p.value, *p.grad, "adam_step(" + p.name + ")");
    require_same_shape(*p.value, state.moments[i].first, "adam_step(" + p.name + ")");
    if (!p.grad->all_finite()) {
      fail(ErrorCode::kNumeric, "non-finite gradient for parameter " + p.name);
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].value->data();
    const auto g = params[i].grad->data();
    auto m = state.moments[i].first.data();
    auto v = state.moments[i].second.data();
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * g[k];
      v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      w[k] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
    }
  }
}

}  // namespace resgcn::nn
