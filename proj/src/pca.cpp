#include "resgcn/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "resgcn/error.hpp"
#include "resgcn/rng.hpp"

namespace resgcn {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Beyond this width the d×d covariance eigensolve gets expensive; fall back to
// subspace iteration on the top components only.
constexpr std::size_t kExactWidthLimit = 1500;

struct Eigenpairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns
};

Eigenpairs exact_top(const Matrix& centered, std::size_t k, double denom) {
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) fail(ErrorCode::kNumeric, "pca: eigensolver failed");
  const auto kk = static_cast<Eigen::Index>(k);
  Eigenpairs out;
  out.values = solver.eigenvalues().tail(kk).reverse();
  out.vectors = solver.eigenvectors().rightCols(kk).rowwise().reverse();
  return out;
}

Eigenpairs subspace_top(const Matrix& centered, std::size_t k, double denom) {
  const auto d = centered.cols();
  const auto block = static_cast<Eigen::Index>(std::min<std::size_t>(k + 10, d));
  Rng rng(0x5eed);
  Eigen::MatrixXd q(d, block);
  for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = rng.normal();
  for (int iter = 0; iter < 30; ++iter) {
    const Eigen::MatrixXd y = centered.transpose() * (centered * q);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(d, block);
  }
  const Eigen::MatrixXd cq = centered * q;
  const Eigen::MatrixXd small = (cq.transpose() * cq) / denom;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(small);
  const auto kk = static_cast<Eigen::Index>(k);
  Eigenpairs out;
  out.values = solver.eigenvalues().tail(kk).reverse();
  out.vectors = q * solver.eigenvectors().rightCols(kk).rowwise().reverse();
  return out;
}

}  // namespace

PcaModel pca_fit(const Tensor2& x, std::size_t k) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (k == 0 || k > std::min(n, d)) {
    fail(ErrorCode::kInvalidArgument, "pca: target dimension " + std::to_string(k) +
                                          " must be in 1..min(n, d) = " +
                                          std::to_string(std::min(n, d)));
  }
  require_finite(x, "pca input");

  Matrix centered = Eigen::Map<const Matrix>(x.data().data(), static_cast<Eigen::Index>(n),
                                             static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = centered.colwise().mean();
  centered.rowwise() -= mean;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const double total = centered.squaredNorm() / denom;

  const Eigenpairs top =
      d <= kExactWidthLimit ? exact_top(centered, k, denom) : subspace_top(centered, k, denom);

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + d);
  model.components = Tensor2(d, k);
  model.explained_variance.resize(k);
  model.explained_variance_ratio.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto col = top.vectors.col(static_cast<Eigen::Index>(c));
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    const double sign = col(arg) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < d; ++r) {
      model.components(r, c) = sign * col(static_cast<Eigen::Index>(r));
    }
    const double ev = std::max(0.0, top.values(static_cast<Eigen::Index>(c)));
    model.explained_variance[c] = ev;
    model.explained_variance_ratio[c] = total > 0.0 ? ev / total : 0.0;
  }
  return model;
}

Tensor2 pca_transform(const PcaModel& model, const Tensor2& x) {
  if (x.cols() != model.mean.size()) {
    fail(ErrorCode::kShape, "pca_transform: model fitted on " +
                                std::to_string(model.mean.size()) + " columns, got " +
                                x.shape_string());
  }
  Tensor2 centered = x;
  for (std::size_t i = 0; i < centered.rows(); ++i) {
    auto r = centered.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= model.mean[j];
  }
  return matmul(centered, model.components);
}

Tensor2 pca_reduce(const Tensor2& x, std::size_t k) {
  return pca_transform(pca_fit(x, k), x);
}

}  // namespace resgcn
