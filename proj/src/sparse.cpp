#include "resgcn/sparse.hpp"

#include <algorithm>

#include "resgcn/error.hpp"

namespace resgcn {

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols_r = row_cols(r);
  const auto it = std::lower_bound(cols_r.begin(), cols_r.end(), c);
  if (it == cols_r.end() || *it != c) return 0.0;
  return values[row_ptr[r] + static_cast<std::size_t>(it - cols_r.begin())];
}

Tensor2 CsrMatrix::to_dense() const {
  Tensor2 out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto c = row_cols(r);
    const auto v = row_values(r);
    for (std::size_t k = 0; k < c.size(); ++k) out(r, c[k]) = v[k];
  }
  return out;
}

CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols,
                            std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  m.col_idx.reserve(triplets.size());
  m.values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (t.row >= rows || t.col >= cols) {
      fail(ErrorCode::kShape, "csr_from_triplets: entry (" + std::to_string(t.row) + "," +
                                  std::to_string(t.col) + ") outside " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
      m.values.back() += t.value;
      continue;
    }
    m.col_idx.push_back(t.col);
    m.values.push_back(t.value);
    ++m.row_ptr[t.row + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

Tensor2 spmm(const CsrMatrix& s, const Tensor2& h) {
  if (s.cols != h.rows()) {
    fail(ErrorCode::kShape, "spmm: inner dimensions differ (" + std::to_string(s.rows) +
                                "x" + std::to_string(s.cols) + ") * " + h.shape_string());
  }
  Tensor2 out(s.rows, h.cols());
  const std::size_t f = h.cols();
  for (std::size_t i = 0; i < s.rows; ++i) {
    double* o = out.row(i).data();
    const auto c = s.row_cols(i);
    const auto v = s.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double* hr = h.row(c[k]).data();
      const double w = v[k];
      for (std::size_t j = 0; j < f; ++j) o[j] += w * hr[j];
    }
  }
  return out;
}

Tensor2 spmm_transposed(const CsrMatrix& s, const Tensor2& h) {
  if (s.rows != h.rows()) {
    fail(ErrorCode::kShape, "spmm_transposed: dimensions differ (" +
                                std::to_string(s.rows) + "x" + std::to_string(s.cols) +
                                ")ᵀ * " + h.shape_string());
  }
  Tensor2 out(s.cols, h.cols());
  const std::size_t f = h.cols();
  for (std::size_t i = 0; i < s.rows; ++i) {
    const double* hr = h.row(i).data();
    const auto c = s.row_cols(i);
    const auto v = s.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      double* o = out.row(c[k]).data();
      const double w = v[k];
      for (std::size_t j = 0; j < f; ++j) o[j] += w * hr[j];
    }
  }
  return out;
}

}  // namespace resgcn
