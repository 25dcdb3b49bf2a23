#include "resgcn/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resgcn/error.hpp"

namespace resgcn {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kResidual: return "residual";
    case Strategy::kAttribute: return "attribute";
    case Strategy::kStructure: return "structure";
    case Strategy::kCombined: return "combined";
  }
  return "residual";
}

Strategy parse_strategy(std::string_view s) {
  for (Strategy st : kAllStrategies)
    if (to_string(st) == s) return st;
  fail(ErrorCode::kInvalidArgument, "unknown ranking strategy \"" + std::string(s) +
                                        "\" (expected residual|attribute|structure|combined)");
}

ScoreReport make_report(Strategy strategy, std::vector<double> scores) {
  for (double v : scores) {
    if (!std::isfinite(v) || v < 0.0) fail(ErrorCode::kNumeric, "anomaly scores must be finite and >= 0");
  }
  std::vector<std::size_t> ranking(scores.size());
  std::iota(ranking.begin(), ranking.end(), std::size_t{0});
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return ScoreReport{strategy, std::move(scores), std::move(ranking)};
}

std::vector<double> structure_row_errors(const Tensor2& z, const CsrMatrix& adjacency) {
  const std::size_t n = z.rows();
  if (adjacency.rows != n || adjacency.cols != n) {
    fail(ErrorCode::kShape, "structure_row_errors: adjacency does not match embedding " +
                                z.shape_string());
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto zi = z.row(i);
    const auto cols = adjacency.row_cols(i);
    const auto vals = adjacency.row_values(i);
    std::size_t p = 0;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto zj = z.row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < zi.size(); ++k) dot += zi[k] * zj[k];
      double target = 0.0;
      if (p < cols.size() && cols[p] == j) target = vals[p++];
      const double r = target - sigmoid(dot);
      acc += r * r;
    }
    out[i] = std::sqrt(acc);
  }
  return out;
}

ScoreReport score_from_state(const AttributedGraph& g, const ForwardState& state, double alpha,
                             Strategy strategy) {
  switch (strategy) {
    case Strategy::kResidual:
      return make_report(strategy, row_norms(state.residual));
    case Strategy::kAttribute:
      return make_report(strategy, row_norms(sub(g.attributes(), state.x_hat)));
    case Strategy::kStructure:
      return make_report(strategy, structure_row_errors(state.z_structure, g.adjacency()));
    case Strategy::kCombined: {
      const auto s = structure_row_errors(state.z_structure, g.adjacency());
      const auto a = row_norms(sub(g.attributes(), state.x_hat));
      std::vector<double> c(s.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = (1.0 - alpha) * s[i] + alpha * a[i];
      return make_report(strategy, std::move(c));
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown ranking strategy");
}

ScoreReport score_nodes(const AttributedGraph& g, const ModelParams& params,
                        const Hyperparams& hp, Strategy strategy) {
  const ForwardState st = forward(g, normalize_adjacency(g), params, hp);
  return score_from_state(g, st, hp.alpha, strategy);
}

std::vector<ScoreReport> score_all(const AttributedGraph& g, const ModelParams& params,
                                   const Hyperparams& hp) {
  const ForwardState st = forward(g, normalize_adjacency(g), params, hp);
  std::vector<ScoreReport> out;
  for (Strategy s : kAllStrategies) out.push_back(score_from_state(g, st, hp.alpha, s));
  return out;
}

}  // namespace resgcn
