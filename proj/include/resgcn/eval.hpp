#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "resgcn/graph.hpp"
#include "resgcn/model.hpp"
#include "resgcn/scoring.hpp"

namespace resgcn {

inline const std::vector<std::size_t> kDefaultKs{50, 100, 200, 300};

struct EvalResult {
  double auc = 0.0;
  std::map<std::size_t, double> precision_at;
  std::map<std::size_t, double> recall_at;
  std::size_t n_anomalies = 0;
  std::size_t n_nodes = 0;

  bool operator==(const EvalResult&) const = default;
};

/// Mann-Whitney AUC with ties counted half, via average ranks.
/// ErrorCode::kUndefinedMetric if labels hold a single class.
double roc_auc(std::span<const double> scores, const Labels& labels);

struct PrecisionRecall {
  std::map<std::size_t, double> precision_at;
  std::map<std::size_t, double> recall_at;
};
/// Top-K from `ranking`. K outside [1, n] is ErrorCode::kInvalidArgument.
PrecisionRecall precision_recall_at(std::span<const std::size_t> ranking, const Labels& labels,
                                    std::span<const std::size_t> ks);

EvalResult evaluate(const ScoreReport& report, const Labels& labels,
                    std::span<const std::size_t> ks);

struct StrategyEval {
  Strategy strategy;
  EvalResult result;
};
std::vector<StrategyEval> compare_strategies(const AttributedGraph& g, const ModelParams& params,
                                             const Hyperparams& hp, const Labels& labels,
                                             std::span<const std::size_t> ks);

nlohmann::json to_json(const EvalResult& r);
EvalResult eval_result_from_json(const nlohmann::json& j);

/// "auc,precision@50,...,recall@50,..." header plus one row.
std::string format_eval_csv(const EvalResult& r);
/// Same columns, prefixed with a strategy column, one row per strategy.
std::string format_comparison_csv(std::span<const StrategyEval> rows);

}  // namespace resgcn
