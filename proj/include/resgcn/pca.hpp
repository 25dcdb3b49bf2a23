#pragma once

#include <cstddef>
#include <vector>

#include "resgcn/tensor.hpp"

namespace resgcn {

struct PcaModel {
  std::vector<double> mean;                      // per input column
  Tensor2 components;                            // d × k, one component per column
  std::vector<double> explained_variance;        // length k, descending
  std::vector<double> explained_variance_ratio;  // explained_variance / total variance
};

/// Principal components of the column-centered data (no unit-variance
/// scaling). Each component's largest-magnitude loading is made positive.
/// Requires 1 <= k <= min(n, d); otherwise ErrorCode::kInvalidArgument.
PcaModel pca_fit(const Tensor2& x, std::size_t k);
Tensor2 pca_transform(const PcaModel& model, const Tensor2& x);
Tensor2 pca_reduce(const Tensor2& x, std::size_t k);

}  // namespace resgcn
