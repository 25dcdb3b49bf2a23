#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resgcn/tensor.hpp"

namespace resgcn::nn {

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamMoments {
  Tensor2 first;
  Tensor2 second;
};

/// Optimizer state; `moments[i]` belongs to the i-th parameter passed to adam_step.
struct AdamState {
  std::vector<AdamMoments> moments;
  std::uint64_t step = 0;
};

struct ParamSlot {
  std::string name;
  Tensor2* value;
  const Tensor2* grad;
};

/// One bias-corrected Adam update over every slot. The step counter is bumped
/// before bias correction, so the first call uses t = 1. A non-finite gradient
/// raises ErrorCode::kNumeric naming the parameter, and nothing is modified.
void adam_step(std::span<const ParamSlot> params, AdamState& state, const AdamConfig& config);

}  // namespace resgcn::nn
