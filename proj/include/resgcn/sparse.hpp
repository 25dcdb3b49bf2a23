#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "resgcn/tensor.hpp"

namespace resgcn {

/// Compressed-row sparse matrix. Column indices within a row are strictly
/// increasing.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return col_idx.size(); }
  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_idx.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  /// Stored value at (r, c), or 0 if absent.
  double at(std::size_t r, std::size_t c) const;
  Tensor2 to_dense() const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Builds a CSR matrix; duplicate coordinates are summed.
CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols,
                            std::vector<Triplet> triplets);

/// s·h
Tensor2 spmm(const CsrMatrix& s, const Tensor2& h);
/// sᵀ·h
Tensor2 spmm_transposed(const CsrMatrix& s, const Tensor2& h);

}  // namespace resgcn
