#include "resgcn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "resgcn/error.hpp"
#include "resgcn/rng.hpp"

namespace resgcn {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    fail(ErrorCode::kShape, "Tensor2: " + std::to_string(data_.size()) +
                                " values for shape " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

Tensor2::Tensor2(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::kShape, "Tensor2: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Tensor2 Tensor2::identity(std::size_t n) {
  Tensor2 t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

bool Tensor2::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string Tensor2::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

void Tensor2::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor2& Tensor2::operator+=(const Tensor2& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

void require_same_shape(const Tensor2& a, const Tensor2& b, std::string_view op) {
  if (!a.same_shape(b)) {
    fail(ErrorCode::kShape, std::string(op) + ": shape mismatch " + a.shape_string() +
                                " vs " + b.shape_string());
  }
}

void require_finite(const Tensor2& t, std::string_view what) {
  if (!t.all_finite()) {
    fail(ErrorCode::kNumeric, "non-finite value in " + std::string(what));
  }
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  if (a.cols() != b.rows()) {
    fail(ErrorCode::kShape, "matmul: inner dimensions differ " + a.shape_string() +
                                " * " + b.shape_string());
  }
  Tensor2 out(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* o = out.row(i).data();
    const double* ar = a.row(i).data();
    for (std::size_t k = 0; k < inner; ++k) {
      const double av = ar[k];
      if (av == 0.0) continue;
      const double* br = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
    }
  }
  return out;
}

Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b) {
  if (a.rows() != b.rows()) {
    fail(ErrorCode::kShape, "matmul_tn: row counts differ " + a.shape_string() +
                                "ᵀ * " + b.shape_string());
  }
  Tensor2 out(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* ar = a.row(k).data();
    const double* br = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double av = ar[i];
      if (av == 0.0) continue;
      double* o = out.row(i).data();
      for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
    }
  }
  return out;
}

Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b) {
  if (a.cols() != b.cols()) {
    fail(ErrorCode::kShape, "matmul_nt: column counts differ " + a.shape_string() +
                                " * " + b.shape_string() + "ᵀ");
  }
  Tensor2 out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ar = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto br = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < ar.size(); ++k) acc += ar[k] * br[k];
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor2 transpose(const Tensor2& a) {
  Tensor2 out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

namespace {

template <typename F>
Tensor2 zip(const Tensor2& a, const Tensor2& b, std::string_view op, F f) {
  require_same_shape(a, b, op);
  Tensor2 out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = f(x[i], y[i]);
  return out;
}

template <typename F>
Tensor2 map(const Tensor2& a, F f) {
  Tensor2 out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = f(x[i]);
  return out;
}

}  // namespace

Tensor2 add(const Tensor2& a, const Tensor2& b) {
  return zip(a, b, "add", [](double x, double y) { return x + y; });
}
Tensor2 sub(const Tensor2& a, const Tensor2& b) {
  return zip(a, b, "sub", [](double x, double y) { return x - y; });
}
Tensor2 hadamard(const Tensor2& a, const Tensor2& b) {
  return zip(a, b, "hadamard", [](double x, double y) { return x * y; });
}
Tensor2 scale(const Tensor2& a, double s) {
  return map(a, [s](double x) { return s * x; });
}

Tensor2 relu(const Tensor2& x) {
  return map(x, [](double v) { return v > 0.0 ? v : 0.0; });
}

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

Tensor2 sigmoid(const Tensor2& x) {
  return map(x, [](double v) { return sigmoid(v); });
}

Tensor2 exp_neg(const Tensor2& x, double gamma) {
  return map(x, [gamma](double v) { return std::exp(-gamma * v); });
}

double frobenius_sq(const Tensor2& x) {
  double acc = 0.0;
  for (double v : x.data()) acc += v * v;
  return acc;
}

std::vector<double> row_norms(const Tensor2& x) {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double acc = 0.0;
    for (double v : x.row(i)) acc += v * v;
    out[i] = std::sqrt(acc);
  }
  return out;
}

double max_abs_diff(const Tensor2& a, const Tensor2& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

Tensor2 glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) fail(ErrorCode::kInvalidArgument, "glorot_init: empty shape");
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor2 out(rows, cols);
  for (double& v : out.data()) v = rng.uniform(-a, a);
  return out;
}

}  // namespace resgcn
