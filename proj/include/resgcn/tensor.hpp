#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace resgcn {

class Rng;

/// Dense row-major matrix of doubles. Every matrix in the model (weights,
/// residuals, attention maps, embeddings, reconstructions) is one of these.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);
  Tensor2(std::initializer_list<std::initializer_list<double>> rows);

  static Tensor2 identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  bool same_shape(const Tensor2& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const noexcept;
  std::string shape_string() const;

  void fill(double v);
  Tensor2& operator+=(const Tensor2& other);

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Dense kernels. All throw ErrorCode::kShape on mismatched operands.
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b);  // aᵀ·b
Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b);  // a·bᵀ
Tensor2 transpose(const Tensor2& a);
Tensor2 add(const Tensor2& a, const Tensor2& b);
Tensor2 sub(const Tensor2& a, const Tensor2& b);
Tensor2 hadamard(const Tensor2& a, const Tensor2& b);
Tensor2 scale(const Tensor2& a, double s);

Tensor2 relu(const Tensor2& x);
Tensor2 sigmoid(const Tensor2& x);
/// exp(-gamma * x), elementwise.
Tensor2 exp_neg(const Tensor2& x, double gamma);

double sigmoid(double v);
double frobenius_sq(const Tensor2& x);
/// L2 norm of every row.
std::vector<double> row_norms(const Tensor2& x);
double max_abs_diff(const Tensor2& a, const Tensor2& b);

/// Uniform in [-a, a] with a = sqrt(6 / (rows + cols)).
Tensor2 glorot_init(std::size_t rows, std::size_t cols, Rng& rng);

/// Throws ErrorCode::kNumeric naming `what` if any entry is NaN or infinite.
void require_finite(const Tensor2& t, std::string_view what);
void require_same_shape(const Tensor2& a, const Tensor2& b, std::string_view op);

}  // namespace resgcn
