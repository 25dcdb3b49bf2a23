#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "resgcn/graph.hpp"
#include "resgcn/model.hpp"

namespace resgcn {

enum class Strategy { kResidual, kAttribute, kStructure, kCombined };
inline constexpr std::array<Strategy, 4> kAllStrategies{
    Strategy::kResidual, Strategy::kAttribute, Strategy::kStructure, Strategy::kCombined};

std::string_view to_string(Strategy s);
/// Throws ErrorCode::kInvalidArgument for anything but residual, attribute,
/// structure or combined.
Strategy parse_strategy(std::string_view s);

struct ScoreReport {
  Strategy strategy;
  std::vector<double> scores;
  /// Node indices by descending score; ties go to the lower index.
  std::vector<std::size_t> ranking;
};

ScoreReport make_report(Strategy strategy, std::vector<double> scores);

/// ||A_i - sigmoid(z_i·Zᵀ)||_2 for every row, streamed without the n×n matrix.
std::vector<double> structure_row_errors(const Tensor2& z, const CsrMatrix& adjacency);

/// Scores from an already computed forward pass.
ScoreReport score_from_state(const AttributedGraph& g, const ForwardState& state, double alpha,
                             Strategy strategy);

/// residual:  ||R_i||
/// attribute: ||X_i - X̂_i||
/// structure: ||A_i - Â_i||
/// combined:  (1-α)·structure + α·attribute
ScoreReport score_nodes(const AttributedGraph& g, const ModelParams& params,
                        const Hyperparams& hp, Strategy strategy);
/// All four strategies from a single forward pass, in kAllStrategies order.
std::vector<ScoreReport> score_all(const AttributedGraph& g, const ModelParams& params,
                                   const Hyperparams& hp);

}  // namespace resgcn
