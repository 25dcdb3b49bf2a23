#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "resgcn/config.hpp"
#include "resgcn/eval.hpp"
#include "resgcn/graph.hpp"

namespace resgcn {

/// What a command wrote plus a short human summary.
struct CommandOutput {
  std::vector<std::string> files;
  std::vector<std::string> summary;
};

/// Applies PCA to min(pca_dim, n, d) columns when pca_dim > 0. Returns the
/// width actually used (0 when attributes are passed through).
std::size_t reduce_attributes(AttributedGraph& g, std::size_t pca_dim);

/// Parses "rank,node,score" rows back into a report (strategy is left as residual).
ScoreReport parse_scores_csv(std::string_view text, const std::string& source = "<scores>");
std::string format_scores_csv(const ScoreReport& report);

struct SweepRow {
  double value;
  EvalResult result;
  double final_loss;
};
std::string format_sweep_csv(const std::string& param, const std::vector<SweepRow>& rows);

// Each validates `cfg` for its command, computes everything, then writes
// into cfg.out. Nothing is written if any step fails before the write phase.
CommandOutput run_synth(const RunConfig& cfg);
CommandOutput run_inject(const RunConfig& cfg);
CommandOutput run_train(const RunConfig& cfg);
CommandOutput run_score(const RunConfig& cfg);
CommandOutput run_eval(const RunConfig& cfg);
CommandOutput run_sweep(const RunConfig& cfg);

/// Library-level sweep used by run_sweep; rows come back in grid order.
std::vector<SweepRow> sweep(const AttributedGraph& g, const Labels& labels, const RunConfig& cfg);

}  // namespace resgcn
