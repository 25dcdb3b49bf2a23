#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "resgcn/graph.hpp"
#include "resgcn/model.hpp"

namespace resgcn {

struct EpochRecord {
  std::size_t epoch;
  double e_s;
  double e_a;
  double loss;
};
using TrainingHistory = std::vector<EpochRecord>;

/// Full-batch forward/backward/Adam cycle over one model. Owns the tape for
/// the current pass; `params` must outlive the session.
class TrainingSession {
 public:
  TrainingSession(const AttributedGraph& g, const Hyperparams& hp, ModelParams& params);

  /// Records a fresh forward pass (discarding any previous one).
  const ForwardState& forward();
  /// Throws ErrorCode::kState unless a forward pass is pending.
  void backward();
  /// Gradients from the last backward(), aligned with params.named_tensors().
  const std::vector<Tensor2>& gradients() const { return grads_; }
  /// Applies one Adam update; requires a preceding backward().
  void step();

  EpochRecord run_epoch(std::size_t epoch);
  std::uint64_t relu_pattern() const noexcept { return tape_.relu_pattern(); }
  const NormalizedAdjacency& normalized() const noexcept { return s_; }

 private:
  const AttributedGraph& g_;
  Hyperparams hp_;
  ModelParams& params_;
  NormalizedAdjacency s_;
  nn::Tape tape_;
  std::vector<nn::Var> leaves_;
  TapeForward recorded_;
  ForwardState state_;
  std::vector<Tensor2> grads_;
  bool forward_pending_ = false;
  bool grads_ready_ = false;
};

struct TrainResult {
  ModelParams params;
  TrainingHistory history;
};

/// hp.epochs full-batch epochs from a fresh Glorot initialization. History rows
/// hold the loss measured before each epoch's update.
TrainResult train(const AttributedGraph& g, const Hyperparams& hp);
TrainResult train(const AttributedGraph& g, const Hyperparams& hp, ModelParams initial);

std::string format_history_csv(const TrainingHistory& history);

struct GradientCheckReport {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
  std::size_t skipped_kinks = 0;  // probes whose ±h straddled a ReLU kink
};

/// Compares backward() against central differences of the joint loss for
/// every parameter entry. Relative error is |a - f| / max(|a|, |f|, floor);
/// the floor keeps entries far below the difference quotient's rounding
/// noise (~1e-10 at h = 1e-5) from dominating. Materializes n×n; small graphs only.
GradientCheckReport check_gradients(const AttributedGraph& g, const Hyperparams& hp,
                                    const ModelParams& params, double h = 1e-5,
                                    double floor = 1e-5);

}  // namespace resgcn
