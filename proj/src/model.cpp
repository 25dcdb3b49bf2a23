#include "resgcn/model.hpp"

#include "resgcn/error.hpp"
#include "resgcn/rng.hpp"

namespace resgcn {

std::string_view to_string(EmbeddingAttention mode) {
  switch (mode) {
    case EmbeddingAttention::kBoth: return "both";
    case EmbeddingAttention::kStructure: return "structure";
    case EmbeddingAttention::kAttribute: return "attribute";
    case EmbeddingAttention::kNone: return "none";
  }
  return "both";
}

EmbeddingAttention parse_embedding_attention(std::string_view s) {
  if (s == "both") return EmbeddingAttention::kBoth;
  if (s == "structure") return EmbeddingAttention::kStructure;
  if (s == "attribute") return EmbeddingAttention::kAttribute;
  if (s == "none") return EmbeddingAttention::kNone;
  fail(ErrorCode::kInvalidArgument, "unknown embedding attention mode \"" + std::string(s) +
                                        "\" (expected both|structure|attribute|none)");
}

void Hyperparams::validate() const {
  const auto bad = [](const std::string& m) { fail(ErrorCode::kConfig, m); };
  if (!(alpha >= 0.0 && alpha <= 1.0)) bad("alpha must lie in [0, 1]");
  if (!(lambda >= 0.0)) bad("lambda must be >= 0");
  if (!(gamma >= 0.0)) bad("gamma must be >= 0");
  if (!(lr > 0.0)) bad("lr must be > 0");
  if (epochs < 1) bad("epochs must be >= 1");
  if (gcn_dims.empty()) bad("gcn_dims must not be empty");
  for (std::size_t w : gcn_dims)
    if (w == 0) bad("gcn_dims entries must be positive");
  if (res_layers < 1) bad("res_layers must be >= 1");
  if (att_layers < 1) bad("att_layers must be >= 1");
  if (decoder_layers < 1) bad("decoder_layers must be >= 1");
}

namespace {

struct Shape {
  std::size_t rows;
  std::size_t cols;
};

struct Layout {
  std::vector<Shape> residual;
  std::vector<std::vector<Shape>> attention;
  std::vector<Shape> gcn;
  std::vector<Shape> decoder;
};

Layout layout_for(std::size_t d, const Hyperparams& hp) {
  Layout l;
  l.residual.assign(hp.res_layers, {d, d});
  for (std::size_t w : hp.gcn_dims) {
    std::vector<Shape> stack{{d, w}};
    for (std::size_t i = 1; i < hp.att_layers; ++i) stack.push_back({w, w});
    l.attention.push_back(std::move(stack));
  }
  std::size_t prev = d;
  for (std::size_t w : hp.gcn_dims) {
    l.gcn.push_back({prev, w});
    prev = w;
  }
  const std::size_t wide = hp.gcn_dims.front();
  if (hp.decoder_layers == 1) {
    l.decoder.push_back({prev, d});
  } else {
    l.decoder.push_back({prev, wide});
    for (std::size_t i = 2; i < hp.decoder_layers; ++i) l.decoder.push_back({wide, wide});
    l.decoder.push_back({wide, d});
  }
  return l;
}

template <typename Params, typename Out>
void collect(Params& p, Out& out) {
  for (std::size_t i = 0; i < p.residual.size(); ++i)
    out.emplace_back("residual." + std::to_string(i), &p.residual[i]);
  for (std::size_t s = 0; s < p.attention.size(); ++s)
    for (std::size_t i = 0; i < p.attention[s].size(); ++i)
      out.emplace_back("attention." + std::to_string(s) + "." + std::to_string(i),
                       &p.attention[s][i]);
  for (std::size_t i = 0; i < p.gcn.size(); ++i)
    out.emplace_back("gcn." + std::to_string(i), &p.gcn[i]);
  for (std::size_t i = 0; i < p.decoder.size(); ++i)
    out.emplace_back("decoder." + std::to_string(i), &p.decoder[i]);
}

nn::Var fc_relu_stack(nn::Var in, std::span<const nn::Var> weights) {
  for (const nn::Var& w : weights) in = nn::relu(nn::matmul(in, w));
  return in;
}

nn::Var gcn_layer(const CsrMatrix& s, nn::Var h, nn::Var w) {
  // Aggregate on whichever side of W is narrower.
  const bool project_first = w.value().cols() <= w.value().rows();
  const nn::Var pre =
      project_first ? nn::spmm(s, nn::matmul(h, w)) : nn::matmul(nn::spmm(s, h), w);
  return nn::relu(pre);
}

nn::Var attribute_mlp(nn::Var z, std::span<const nn::Var> weights) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    z = nn::matmul(z, weights[i]);
    if (i + 1 < weights.size()) z = nn::relu(z);
  }
  return z;
}

std::vector<nn::Var> constants(nn::Tape& tape, const std::vector<Tensor2>& ts) {
  std::vector<nn::Var> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(tape.constant(t));
  return out;
}

ParamVars constant_params(nn::Tape& tape, const ModelParams& p) {
  ParamVars v;
  v.residual = constants(tape, p.residual);
  for (const auto& stack : p.attention) v.attention.push_back(constants(tape, stack));
  v.gcn = constants(tape, p.gcn);
  v.decoder = constants(tape, p.decoder);
  return v;
}

}  // namespace

ModelParams ModelParams::initialize(std::size_t input_dim, const Hyperparams& hp) {
  hp.validate();
  if (input_dim == 0) fail(ErrorCode::kConfig, "input dimension must be positive");
  const Layout l = layout_for(input_dim, hp);
  ModelParams p;
  for (const auto& s : l.residual) p.residual.emplace_back(s.rows, s.cols);
  for (const auto& stack : l.attention) {
    p.attention.emplace_back();
    for (const auto& s : stack) p.attention.back().emplace_back(s.rows, s.cols);
  }
  for (const auto& s : l.gcn) p.gcn.emplace_back(s.rows, s.cols);
  for (const auto& s : l.decoder) p.decoder.emplace_back(s.rows, s.cols);
  Rng rng(hp.seed);
  for (auto& [name, t] : p.named_tensors()) *t = glorot_init(t->rows(), t->cols(), rng);
  return p;
}

std::vector<std::pair<std::string, Tensor2*>> ModelParams::named_tensors() {
  std::vector<std::pair<std::string, Tensor2*>> out;
  collect(*this, out);
  return out;
}

std::vector<std::pair<std::string, const Tensor2*>> ModelParams::named_tensors() const {
  std::vector<std::pair<std::string, const Tensor2*>> out;
  collect(*this, out);
  return out;
}

void ModelParams::check_shapes(std::size_t input_dim, const Hyperparams& hp) const {
  const Layout l = layout_for(input_dim, hp);
  std::vector<Shape> expected(l.residual);
  for (const auto& stack : l.attention) expected.insert(expected.end(), stack.begin(), stack.end());
  expected.insert(expected.end(), l.gcn.begin(), l.gcn.end());
  expected.insert(expected.end(), l.decoder.begin(), l.decoder.end());
  const auto have = named_tensors();
  if (have.size() != expected.size() || attention.size() != l.attention.size()) {
    fail(ErrorCode::kConfig, "parameter count " + std::to_string(have.size()) +
                                 " does not match the configured architecture (" +
                                 std::to_string(expected.size()) + ")");
  }
  for (std::size_t i = 0; i < have.size(); ++i) {
    const Tensor2& t = *have[i].second;
    if (t.rows() != expected[i].rows || t.cols() != expected[i].cols) {
      fail(ErrorCode::kConfig, have[i].first + " has shape " + t.shape_string() + ", expected (" +
                                   std::to_string(expected[i].rows) + "x" +
                                   std::to_string(expected[i].cols) + ")");
    }
  }
}

Tensor2 compute_residual(const Tensor2& x, const ModelParams& params) {
  if (params.residual.empty()) fail(ErrorCode::kConfig, "residual network has no layers");
  nn::Tape tape;
  return fc_relu_stack(tape.constant(x), constants(tape, params.residual)).value();
}

std::vector<Tensor2> compute_attention(const Tensor2& r, const ModelParams& params,
                                       double gamma) {
  nn::Tape tape;
  const nn::Var rv = tape.constant(r);
  std::vector<Tensor2> out;
  for (const auto& stack : params.attention) {
    out.push_back(nn::exp_neg(fc_relu_stack(rv, constants(tape, stack)), gamma).value());
  }
  return out;
}

Encoding encode(const CsrMatrix& s, const Tensor2& x, std::span<const Tensor2> attention,
                const ModelParams& params) {
  if (params.gcn.empty()) fail(ErrorCode::kConfig, "encoder has no layers");
  if (attention.size() + 1 < params.gcn.size()) {
    fail(ErrorCode::kShape, "encode: " + std::to_string(params.gcn.size()) + " layers need " +
                                std::to_string(params.gcn.size() - 1) + " attention maps, got " +
                                std::to_string(attention.size()));
  }
  nn::Tape tape;
  nn::Var h = tape.constant(x);
  Encoding out;
  for (std::size_t l = 0; l < params.gcn.size(); ++l) {
    if (l > 0) h = nn::hadamard(h, tape.constant(attention[l - 1]));
    h = gcn_layer(s, h, tape.constant(params.gcn[l]));
    if (l + 1 < params.gcn.size()) out.hidden.push_back(h.value());
  }
  out.z = h.value();
  return out;
}

Tensor2 decode_structure(const Tensor2& z) { return sigmoid(matmul_nt(z, z)); }

Tensor2 decode_attributes(const Tensor2& z, const ModelParams& params) {
  if (params.decoder.empty()) fail(ErrorCode::kConfig, "attribute decoder has no layers");
  nn::Tape tape;
  return attribute_mlp(tape.constant(z), constants(tape, params.decoder)).value();
}

LossBreakdown loss(const Tensor2& a, const Tensor2& x, const Tensor2& a_hat,
                   const Tensor2& x_hat, const Tensor2& r, double alpha, double lambda) {
  LossBreakdown out{};
  out.structure = frobenius_sq(sub(a, a_hat));
  out.attribute = frobenius_sq(sub(sub(x, x_hat), scale(r, lambda)));
  out.total = (1.0 - alpha) * out.structure + alpha * out.attribute;
  return out;
}

TapeForward record_forward(const CsrMatrix& normalized, const CsrMatrix& adjacency, nn::Var x,
                           const ParamVars& params, const Hyperparams& hp) {
  TapeForward f;
  f.residual = fc_relu_stack(x, params.residual);
  for (const auto& stack : params.attention) {
    f.attention.push_back(nn::exp_neg(fc_relu_stack(f.residual, stack), hp.gamma));
  }

  nn::Var h = x;
  for (std::size_t l = 0; l < params.gcn.size(); ++l) {
    if (l > 0) h = nn::hadamard(h, f.attention[l - 1]);
    h = gcn_layer(normalized, h, params.gcn[l]);
    if (l + 1 < params.gcn.size()) f.hidden.push_back(h);
  }
  f.z = h;

  const auto mode = hp.embedding_attention;
  f.z_structure = f.z;
  f.z_attribute = f.z;
  if (mode != EmbeddingAttention::kNone) {
    const nn::Var attended = nn::hadamard(f.z, f.attention.back());
    if (mode == EmbeddingAttention::kBoth || mode == EmbeddingAttention::kStructure)
      f.z_structure = attended;
    if (mode == EmbeddingAttention::kBoth || mode == EmbeddingAttention::kAttribute)
      f.z_attribute = attended;
  }

  f.x_hat = attribute_mlp(f.z_attribute, params.decoder);
  f.e_s = nn::structure_error(f.z_structure, adjacency);
  f.e_a = nn::frobenius_sq(nn::sub(nn::sub(x, f.x_hat), nn::scale(f.residual, hp.lambda)));
  f.loss = nn::weighted_sum(f.e_s, 1.0 - hp.alpha, f.e_a, hp.alpha);
  return f;
}

ForwardState forward(const AttributedGraph& g, const NormalizedAdjacency& s,
                     const ModelParams& params, const Hyperparams& hp,
                     bool materialize_structure) {
  params.check_shapes(g.dim(), hp);
  nn::Tape tape;
  const ParamVars vars = constant_params(tape, params);
  const TapeForward f =
      record_forward(s.matrix, g.adjacency(), tape.constant(g.attributes()), vars, hp);
  ForwardState st;
  st.residual = f.residual.value();
  for (const auto& a : f.attention) st.attention.push_back(a.value());
  for (const auto& h : f.hidden) st.hidden.push_back(h.value());
  st.z = f.z.value();
  st.z_structure = f.z_structure.value();
  st.z_attribute = f.z_attribute.value();
  st.x_hat = f.x_hat.value();
  st.e_s = f.e_s.value()(0, 0);
  st.e_a = f.e_a.value()(0, 0);
  st.loss = f.loss.value()(0, 0);
  if (materialize_structure) st.a_hat = decode_structure(st.z_structure);
  return st;
}

}  // namespace resgcn
