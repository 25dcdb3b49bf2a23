#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "resgcn/error.hpp"
#include "resgcn/eval.hpp"
#include "resgcn/rng.hpp"
#include "resgcn/synth.hpp"

using namespace resgcn;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(Auc, PerfectAndTied) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.8, 0.1, 0.2}, Labels{1, 1, 0, 0}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>(6, 0.3), Labels{1, 0, 0, 1, 0, 0}), 0.5);
}

TEST(Auc, SingleClassIsUndefined) {
  EXPECT_EQ(code_of([] { roc_auc(std::vector<double>{1, 2}, Labels{1, 1}); }),
            ErrorCode::kUndefinedMetric);
  EXPECT_EQ(code_of([] { roc_auc(std::vector<double>{1, 2}, Labels{0, 0}); }),
            ErrorCode::kUndefinedMetric);
}

TEST(Auc, MatchesPairwiseOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(80);
    std::vector<double> s(n);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial % 2 ? static_cast<double>(rng.below(5)) : rng.normal();
      y[i] = static_cast<int>(i < 2 ? i : rng.below(2));
    }
    const double a = roc_auc(s, y);
    EXPECT_NEAR(a, oracle::pairwise_auc(s, y), 1e-12);

    std::vector<double> f;
    for (double v : s) f.push_back(std::exp(v) * 2.0 - 7.0);
    EXPECT_NEAR(roc_auc(f, y), a, 1e-12);
    if (trial % 2 == 0) {  // continuous scores, no ties
      std::vector<double> neg;
      for (double v : s) neg.push_back(-v);
      EXPECT_NEAR(roc_auc(neg, y), 1.0 - a, 1e-12);
    }
  }
}

TEST(PrecisionRecall, HandCountedExample) {
  const std::vector<std::size_t> ranking{0, 3, 1, 2, 4};
  const Labels y{1, 1, 0, 0, 0};
  const std::vector<std::size_t> ks{2, 5};
  const auto pr = precision_recall_at(ranking, y, ks);
  EXPECT_EQ(pr.precision_at.at(2), 0.5);
  EXPECT_EQ(pr.recall_at.at(2), 0.5);
  EXPECT_EQ(pr.precision_at.at(5), 0.4);
  EXPECT_EQ(pr.recall_at.at(5), 1.0);
}

TEST(PrecisionRecall, OutOfRangeK) {
  const std::vector<std::size_t> ranking{0, 1};
  const Labels y{1, 0};
  for (std::size_t k : {0u, 3u}) {
    const std::vector<std::size_t> ks{k};
    EXPECT_EQ(code_of([&] { precision_recall_at(ranking, y, ks); }), ErrorCode::kInvalidArgument);
  }
}

TEST(PrecisionRecall, MatchesSetOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<double> s(n);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(10));
      y[i] = static_cast<int>(rng.below(2));
    }
    const auto report = make_report(Strategy::kResidual, s);
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k <= n; ++k) ks.push_back(k);
    const auto pr = precision_recall_at(report.ranking, y, ks);
    std::size_t anomalies = 0;
    for (int l : y) anomalies += static_cast<std::size_t>(l);
    double prev_recall = 0.0;
    for (std::size_t k : ks) {
      const auto ref = oracle::set_precision_recall(report.ranking, y, k);
      EXPECT_EQ(pr.precision_at.at(k), ref.precision);
      EXPECT_EQ(pr.recall_at.at(k), ref.recall);
      EXPECT_GE(pr.recall_at.at(k), prev_recall);
      prev_recall = pr.recall_at.at(k);
      const double hits = pr.precision_at.at(k) * static_cast<double>(k);
      EXPECT_NEAR(hits, std::round(hits), 1e-9);
      if (anomalies) {
        EXPECT_NEAR(hits, pr.recall_at.at(k) * static_cast<double>(anomalies), 1e-9);
      }
    }
    if (anomalies) {
      EXPECT_EQ(pr.recall_at.at(n), 1.0);
      EXPECT_DOUBLE_EQ(pr.precision_at.at(n), static_cast<double>(anomalies) / static_cast<double>(n));
    }
  }
}

TEST(Evaluate, JsonAndCsv) {
  const auto report = make_report(Strategy::kResidual, {0.9, 0.1, 0.8, 0.3});
  const std::vector<std::size_t> ks{1, 2};
  const auto r = evaluate(report, Labels{1, 0, 1, 0}, ks);
  EXPECT_EQ(r.auc, 1.0);
  EXPECT_EQ(r.n_anomalies, 2u);
  EXPECT_EQ(r.n_nodes, 4u);
  EXPECT_EQ(eval_result_from_json(nlohmann::json::parse(to_json(r).dump())), r);
  EXPECT_EQ(format_eval_csv(r), "auc,precision@1,precision@2,recall@1,recall@2\n1,1,1,0.5,1\n");
}

TEST(CompareStrategies, OneRowPerStrategy) {
  const auto g = make_random_graph(40, 80, 4, 3);
  Hyperparams hp;
  hp.gcn_dims = {8, 4};
  hp.alpha = 1.0;
  hp.seed = 4;
  const auto p = ModelParams::initialize(4, hp);
  Labels y(40, 0);
  for (std::size_t i = 0; i < 40; i += 5) y[i] = 1;
  const std::vector<std::size_t> ks{5, 10};
  const auto rows = compare_strategies(g, p, hp, y, ks);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].strategy, Strategy::kAttribute);
  EXPECT_EQ(rows[3].result, rows[1].result);  // combined at alpha = 1
  const auto csv = format_comparison_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "strategy,auc,precision@5,precision@10,recall@5,recall@10");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(CompareStrategies, IdenticalScoresGiveIdenticalMetrics) {
  const std::vector<double> s{0.3, 0.1, 0.9, 0.4};
  const Labels y{0, 1, 1, 0};
  const std::vector<std::size_t> ks{2};
  const auto a = evaluate(make_report(Strategy::kResidual, s), y, ks);
  const auto b = evaluate(make_report(Strategy::kStructure, s), y, ks);
  EXPECT_EQ(a, b);
}
