#include "resgcn/selfcheck.hpp"

#include <algorithm>
#include <cmath>

#include "resgcn/eval.hpp"
#include "resgcn/rng.hpp"
#include "resgcn/synth.hpp"
#include "resgcn/text.hpp"
#include "resgcn/train.hpp"

namespace resgcn {
namespace {

CheckLine gradient_check(std::uint64_t seed) {
  const auto g = make_random_graph(20, 60, 8, seed);
  Hyperparams hp;
  hp.seed = seed + 1;
  const auto params = ModelParams::initialize(g.dim(), hp);
  const auto rep = check_gradients(g, hp, params);
  return {"gradient", rep.max_rel_error < 1e-4,
          "max_rel_error=" + format_double(rep.max_rel_error) + " at " + rep.worst_param + "[" +
              std::to_string(rep.worst_index) + "] over " + std::to_string(rep.checked) +
              " entries"};
}

CheckLine normalization_check(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    const auto g = make_random_graph(n, rng.below(3 * n + 1), 1, rng.next_u64());
    const Tensor2 a = g.adjacency().to_dense();
    Tensor2 dense(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double di = 1.0, dj = 1.0;
        for (std::size_t q = 0; q < n; ++q) {
          di += a(i, q);
          dj += a(j, q);
        }
        dense(i, j) = (a(i, j) + (i == j ? 1.0 : 0.0)) / std::sqrt(di * dj);
      }
    }
    worst = std::max(worst, max_abs_diff(normalize_adjacency(g).matrix.to_dense(), dense));
  }
  return {"normalization", worst <= 1e-12, "max_abs_diff=" + format_double(worst)};
}

CheckLine metric_check(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> scores(n);
    Labels labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.below(8));  // coarse, so ties happen
      labels[i] = static_cast<int>(i < 2 ? i : rng.below(2));
    }
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[i] != 1 || labels[j] != 0) continue;
        pairs += 1.0;
        wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
      }
    }
    worst = std::max(worst, std::abs(roc_auc(scores, labels) - wins / pairs));
  }
  return {"auc", worst <= 1e-12, "max_abs_diff=" + format_double(worst)};
}

CheckLine ablation_check(std::uint64_t seed) {
  const auto g = make_random_graph(30, 70, 6, seed);
  Hyperparams hp;
  hp.gamma = 0.0;
  hp.lambda = 0.0;
  hp.seed = seed + 7;
  const auto params = ModelParams::initialize(g.dim(), hp);
  const auto s = normalize_adjacency(g);
  const auto state = forward(g, s, params, hp, true);

  // plain two-layer GCN autoencoder on the same weights
  const Tensor2 sd = s.matrix.to_dense();
  const Tensor2& x = g.attributes();
  Tensor2 h = relu(matmul(matmul(sd, x), params.gcn[0]));
  for (std::size_t l = 1; l < params.gcn.size(); ++l) h = relu(matmul(matmul(sd, h), params.gcn[l]));
  const Tensor2 a_hat = sigmoid(matmul_nt(h, h));
  Tensor2 x_hat = h;
  for (std::size_t l = 0; l < params.decoder.size(); ++l) {
    x_hat = matmul(x_hat, params.decoder[l]);
    if (l + 1 < params.decoder.size()) x_hat = relu(x_hat);
  }
  const Tensor2 a = g.adjacency().to_dense();
  const double l_ref = (1 - hp.alpha) * frobenius_sq(sub(a, a_hat)) +
                       hp.alpha * frobenius_sq(sub(x, x_hat));
  const double worst = std::max({max_abs_diff(state.z, h), max_abs_diff(state.a_hat, a_hat),
                                 max_abs_diff(state.x_hat, x_hat), std::abs(state.loss - l_ref)});
  return {"ablation", worst <= 1e-10, "max_abs_diff=" + format_double(worst)};
}

}  // namespace

std::vector<CheckLine> run_selfcheck(std::uint64_t seed) {
  return {gradient_check(derive_seed(seed, "selfcheck.gradient")),
          normalization_check(derive_seed(seed, "selfcheck.normalization")),
          metric_check(derive_seed(seed, "selfcheck.auc")),
          ablation_check(derive_seed(seed, "selfcheck.ablation"))};
}

}  // namespace resgcn
