#include "resgcn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resgcn/error.hpp"
#include "resgcn/text.hpp"

namespace resgcn {
namespace {

void check_labels(std::size_t n, const Labels& labels) {
  if (labels.size() != n) {
    fail(ErrorCode::kDimensionMismatch, std::to_string(n) + " scores but " +
                                            std::to_string(labels.size()) + " labels");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) fail(ErrorCode::kInvalidInput, "labels must be 0 or 1");
  }
}

std::string header_cells(const EvalResult& r) {
  std::string out = "auc";
  for (const auto& [k, v] : r.precision_at) out += ",precision@" + std::to_string(k);
  for (const auto& [k, v] : r.recall_at) out += ",recall@" + std::to_string(k);
  return out;
}

std::string value_cells(const EvalResult& r) {
  std::string out = format_double(r.auc);
  for (const auto& [k, v] : r.precision_at) out += "," + format_double(v);
  for (const auto& [k, v] : r.recall_at) out += "," + format_double(v);
  return out;
}

std::size_t k_value(const std::string& key) {
  auto k = parse_int(key);
  if (!k || *k < 1) fail(ErrorCode::kParse, "bad K key '" + key + "'");
  return static_cast<std::size_t>(*k);
}

}  // namespace

double roc_auc(std::span<const double> scores, const Labels& labels) {
  const std::size_t n = scores.size();
  check_labels(n, labels);
  std::size_t pos = 0;
  for (int l : labels) pos += static_cast<std::size_t>(l);
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) {
    fail(ErrorCode::kUndefinedMetric, "roc_auc needs both positive and negative labels");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) fail(ErrorCode::kNumeric, "roc_auc: non-finite score");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // sum of 1-based average ranks of the positives
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t q = i; q < j; ++q) {
      if (labels[order[q]] == 1) rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

PrecisionRecall precision_recall_at(std::span<const std::size_t> ranking, const Labels& labels,
                                    std::span<const std::size_t> ks) {
  const std::size_t n = ranking.size();
  check_labels(n, labels);
  std::size_t total = 0;
  for (int l : labels) total += static_cast<std::size_t>(l);

  PrecisionRecall out;
  for (std::size_t k : ks) {
    if (k < 1 || k > n) {
      fail(ErrorCode::kInvalidArgument,
           "K=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    std::size_t hits = 0;
    for (std::size_t r = 0; r < k; ++r) {
      if (ranking[r] >= n) fail(ErrorCode::kInvalidInput, "ranking entry out of range");
      hits += static_cast<std::size_t>(labels[ranking[r]]);
    }
    out.precision_at[k] = static_cast<double>(hits) / static_cast<double>(k);
    // no anomalies: nothing to recall, report 0 rather than dividing by zero
    out.recall_at[k] = total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  }
  return out;
}

EvalResult evaluate(const ScoreReport& report, const Labels& labels,
                    std::span<const std::size_t> ks) {
  EvalResult r;
  r.auc = roc_auc(report.scores, labels);
  auto pr = precision_recall_at(report.ranking, labels, ks);
  r.precision_at = std::move(pr.precision_at);
  r.recall_at = std::move(pr.recall_at);
  r.n_nodes = labels.size();
  r.n_anomalies = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  return r;
}

std::vector<StrategyEval> compare_strategies(const AttributedGraph& g, const ModelParams& params,
                                             const Hyperparams& hp, const Labels& labels,
                                             std::span<const std::size_t> ks) {
  std::vector<StrategyEval> rows;
  for (const auto& report : score_all(g, params, hp)) {
    rows.push_back({report.strategy, evaluate(report, labels, ks)});
  }
  return rows;
}

nlohmann::json to_json(const EvalResult& r) {
  nlohmann::json p = nlohmann::json::object();
  nlohmann::json rc = nlohmann::json::object();
  for (const auto& [k, v] : r.precision_at) p[std::to_string(k)] = v;
  for (const auto& [k, v] : r.recall_at) rc[std::to_string(k)] = v;
  return {{"auc", r.auc},
          {"precision_at", std::move(p)},
          {"recall_at", std::move(rc)},
          {"n_anomalies", r.n_anomalies},
          {"n_nodes", r.n_nodes}};
}

EvalResult eval_result_from_json(const nlohmann::json& j) {
  try {
    EvalResult r;
    r.auc = j.at("auc").get<double>();
    for (const auto& [k, v] : j.at("precision_at").items()) {
      r.precision_at[k_value(k)] = v.get<double>();
    }
    for (const auto& [k, v] : j.at("recall_at").items()) {
      r.recall_at[k_value(k)] = v.get<double>();
    }
    r.n_anomalies = j.at("n_anomalies").get<std::size_t>();
    r.n_nodes = j.at("n_nodes").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed eval result: ") + e.what());
  }
}

std::string format_eval_csv(const EvalResult& r) {
  return header_cells(r) + "\n" + value_cells(r) + "\n";
}

std::string format_comparison_csv(std::span<const StrategyEval> rows) {
  if (rows.empty()) return "strategy\n";
  std::string out = "strategy," + header_cells(rows.front().result) + "\n";
  for (const auto& row : rows) {
    out += std::string(to_string(row.strategy)) + "," + value_cells(row.result) + "\n";
  }
  return out;
}

}  // namespace resgcn
