#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resgcn/adam.hpp"
#include "resgcn/autodiff.hpp"
#include "resgcn/graph.hpp"
#include "resgcn/tensor.hpp"

namespace resgcn {

/// Which decoders see the attention-modulated embedding Z ∘ Θ_last.
enum class EmbeddingAttention { kBoth, kStructure, kAttribute, kNone };
std::string_view to_string(EmbeddingAttention mode);
EmbeddingAttention parse_embedding_attention(std::string_view s);

struct Hyperparams {
  double alpha = 0.8;   // weight of the attribute error in the joint loss
  double lambda = 0.1;  // residual weight inside the attribute error
  double gamma = 1.0;   // attention sharpness
  double lr = 0.01;
  std::size_t epochs = 100;
  std::vector<std::size_t> gcn_dims{64, 32};
  std::size_t res_layers = 3;      // residual FC depth, width = input dim
  std::size_t att_layers = 2;      // FC depth of each attention stack
  std::size_t decoder_layers = 2;  // attribute MLP depth
  EmbeddingAttention embedding_attention = EmbeddingAttention::kBoth;
  std::uint64_t seed = 0;  // weight initialization

  /// Throws ErrorCode::kConfig on any out-of-range field.
  void validate() const;
};

/// Trainable weights (no biases anywhere) plus Adam state.
///
/// Shapes for input width d and gcn_dims [w0, ..., wL]:
///   residual:     res_layers × (d×d)
///   attention[l]: d×w_l, then (att_layers-1) × (w_l×w_l)
///   gcn:          d×w0, w0×w1, ...
///   decoder:      wL×d when decoder_layers == 1, else wL×w0, ..., w0×d
struct ModelParams {
  std::vector<Tensor2> residual;
  std::vector<std::vector<Tensor2>> attention;
  std::vector<Tensor2> gcn;
  std::vector<Tensor2> decoder;
  nn::AdamState adam;

  /// Glorot-uniform initialization from hp.seed.
  static ModelParams initialize(std::size_t input_dim, const Hyperparams& hp);

  /// Every trainable tensor in a fixed order ("residual.0", "attention.1.0", ...).
  std::vector<std::pair<std::string, Tensor2*>> named_tensors();
  std::vector<std::pair<std::string, const Tensor2*>> named_tensors() const;

  /// Throws ErrorCode::kConfig if the shapes do not chain for (input_dim, hp).
  void check_shapes(std::size_t input_dim, const Hyperparams& hp) const;
};

// ---------------------------------------------------------------------------
// Stage-by-stage evaluation on plain tensors.

/// R = ReLU(...ReLU(X·W0)·W1...)
Tensor2 compute_residual(const Tensor2& x, const ModelParams& params);
/// One map per GCN layer: exp(-γ · FC-stack(R)), entries in (0, 1].
std::vector<Tensor2> compute_attention(const Tensor2& r, const ModelParams& params, double gamma);

struct Encoding {
  std::vector<Tensor2> hidden;  // H1 .. H_{L-1}
  Tensor2 z;                    // last layer output
};
/// H1 = ReLU(S·X·W0); H_{l+1} = ReLU(S·(H_l ∘ Θ_l)·W_l). Needs at least
/// gcn.size()-1 attention maps; a map for the last layer is ignored here.
Encoding encode(const CsrMatrix& s, const Tensor2& x, std::span<const Tensor2> attention,
                const ModelParams& params);

/// sigmoid(Z·Zᵀ)
Tensor2 decode_structure(const Tensor2& z);
/// MLP with ReLU between layers and a linear output layer.
Tensor2 decode_attributes(const Tensor2& z, const ModelParams& params);

struct LossBreakdown {
  double structure;  // E_S = ||A - Â||²
  double attribute;  // E_A = ||X - X̂ - λR||²
  double total;      // (1-α)·E_S + α·E_A
};
LossBreakdown loss(const Tensor2& a, const Tensor2& x, const Tensor2& a_hat,
                   const Tensor2& x_hat, const Tensor2& r, double alpha, double lambda);

// ---------------------------------------------------------------------------
// Full forward pass.

struct ForwardState {
  Tensor2 residual;
  std::vector<Tensor2> attention;
  std::vector<Tensor2> hidden;
  Tensor2 z;
  Tensor2 z_structure;  // decoder inputs after optional embedding attention
  Tensor2 z_attribute;
  Tensor2 a_hat;  // only filled when materialized (O(n²) memory)
  Tensor2 x_hat;
  double e_s = 0.0;
  double e_a = 0.0;
  double loss = 0.0;
};

struct ParamVars {
  std::vector<nn::Var> residual;
  std::vector<std::vector<nn::Var>> attention;
  std::vector<nn::Var> gcn;
  std::vector<nn::Var> decoder;
};

struct TapeForward {
  nn::Var residual;
  std::vector<nn::Var> attention;
  std::vector<nn::Var> hidden;
  nn::Var z;
  nn::Var z_structure;
  nn::Var z_attribute;
  nn::Var x_hat;
  nn::Var e_s;
  nn::Var e_a;
  nn::Var loss;
};

/// Records the whole model on `x`'s tape. The structure error is evaluated
/// row-streamed, so nothing n×n is kept.
TapeForward record_forward(const CsrMatrix& normalized, const CsrMatrix& adjacency, nn::Var x,
                           const ParamVars& params, const Hyperparams& hp);

/// Value-only forward; `materialize_structure` also fills ForwardState::a_hat.
ForwardState forward(const AttributedGraph& g, const NormalizedAdjacency& s,
                     const ModelParams& params, const Hyperparams& hp,
                     bool materialize_structure = false);

}  // namespace resgcn
