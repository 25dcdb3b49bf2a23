#include "resgcn/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "resgcn/error.hpp"

namespace resgcn::nn {

const Tensor2& Var::value() const { return tape_->value(id_); }
Tensor2 Var::grad() const { return tape_->grad(id_); }

Var Tape::constant(Tensor2 value) {
  nodes_.push_back(Node{std::move(value), {}, false, {}});
  return Var(this, nodes_.size() - 1);
}

Var Tape::leaf(Tensor2 value) {
  nodes_.push_back(Node{std::move(value), {}, true, {}});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(std::string_view op, Tensor2 value, std::initializer_list<Var> parents,
                 Backprop backprop) {
  require_finite(value, op);
  bool needs_grad = false;
  for (const Var& p : parents) {
    if (p.tape_ != this) fail(ErrorCode::kState, std::string(op) + ": operand from another tape");
    needs_grad = needs_grad || nodes_[p.id_].requires_grad;
  }
  nodes_.push_back(
      Node{std::move(value), {}, needs_grad, needs_grad ? std::move(backprop) : Backprop{}});
  return Var(this, nodes_.size() - 1);
}

Tensor2 Tape::grad(std::size_t id) const {
  const Node& node = nodes_.at(id);
  if (node.grad.empty() && !node.value.empty()) {
    return Tensor2(node.value.rows(), node.value.cols());
  }
  return node.grad;
}

void Tape::accumulate(std::size_t id, Tensor2 g) {
  Node& node = nodes_[id];
  if (!node.requires_grad) return;
  if (node.grad.empty()) {
    require_same_shape(node.value, g, "accumulate");
    node.grad = std::move(g);
  } else {
    node.grad += g;
  }
}

void Tape::backward(Var loss) {
  if (nodes_.empty() || !loss.valid()) {
    fail(ErrorCode::kState, "backward called before any forward computation was recorded");
  }
  if (loss.tape_ != this || loss.id_ >= nodes_.size()) {
    fail(ErrorCode::kState, "backward: loss handle does not belong to this tape");
  }
  const Tensor2& lv = nodes_[loss.id_].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    fail(ErrorCode::kShape, "backward: loss must be 1x1, got " + lv.shape_string());
  }
  for (Node& n : nodes_) n.grad = Tensor2();
  if (!nodes_[loss.id_].requires_grad) return;
  nodes_[loss.id_].grad = Tensor2(1, 1, 1.0);
  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.backprop || n.grad.empty()) continue;
    n.backprop(*this, id);
  }
}

void Tape::mix_relu_pattern(const Tensor2& pre_activation) {
  std::uint64_t h = relu_pattern_;
  for (double v : pre_activation.data()) {
    h ^= v > 0.0 ? 0x9fULL : 0x35ULL;
    h *= 0x100000001b3ULL;
  }
  relu_pattern_ = h;
}

void Tape::clear() {
  nodes_.clear();
  relu_pattern_ = 0xcbf29ce484222325ULL;
}

Var matmul(Var a, Var b) {
  Tape& t = a.tape();
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("matmul", resgcn::matmul(a.value(), b.value()), {a, b},
                  [ia, ib](Tape& tp, std::size_t self) {
                    const Tensor2& g = tp.upstream(self);
                    if (tp.requires_grad(ia)) tp.accumulate(ia, resgcn::matmul_nt(g, tp.value(ib)));
                    if (tp.requires_grad(ib)) tp.accumulate(ib, resgcn::matmul_tn(tp.value(ia), g));
                  });
}

Var matmul_nt(Var a, Var b) {
  Tape& t = a.tape();
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("matmul_nt", resgcn::matmul_nt(a.value(), b.value()), {a, b},
                  [ia, ib](Tape& tp, std::size_t self) {
                    const Tensor2& g = tp.upstream(self);
                    // C = A·Bᵀ: dA = G·B, dB = Gᵀ·A
                    if (tp.requires_grad(ia)) tp.accumulate(ia, resgcn::matmul(g, tp.value(ib)));
                    if (tp.requires_grad(ib)) tp.accumulate(ib, resgcn::matmul_tn(g, tp.value(ia)));
                  });
}

Var spmm(const CsrMatrix& s, Var h) {
  Tape& t = h.tape();
  const std::size_t ih = h.id();
  const CsrMatrix* sp = &s;
  return t.record("spmm", resgcn::spmm(s, h.value()), {h},
                  [ih, sp](Tape& tp, std::size_t self) {
                    tp.accumulate(ih, resgcn::spmm_transposed(*sp, tp.upstream(self)));
                  });
}

Var add(Var a, Var b) {
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("add", resgcn::add(a.value(), b.value()), {a, b},
                         [ia, ib](Tape& tp, std::size_t self) {
                           tp.accumulate(ia, tp.upstream(self));
                           tp.accumulate(ib, tp.upstream(self));
                         });
}

Var sub(Var a, Var b) {
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("sub", resgcn::sub(a.value(), b.value()), {a, b},
                         [ia, ib](Tape& tp, std::size_t self) {
                           tp.accumulate(ia, tp.upstream(self));
                           tp.accumulate(ib, resgcn::scale(tp.upstream(self), -1.0));
                         });
}

Var hadamard(Var a, Var b) {
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("hadamard", resgcn::hadamard(a.value(), b.value()), {a, b},
                         [ia, ib](Tape& tp, std::size_t self) {
                           const Tensor2& g = tp.upstream(self);
                           if (tp.requires_grad(ia)) tp.accumulate(ia, resgcn::hadamard(g, tp.value(ib)));
                           if (tp.requires_grad(ib)) tp.accumulate(ib, resgcn::hadamard(g, tp.value(ia)));
                         });
}

Var scale(Var a, double s) {
  const std::size_t ia = a.id();
  return a.tape().record("scale", resgcn::scale(a.value(), s), {a},
                         [ia, s](Tape& tp, std::size_t self) {
                           tp.accumulate(ia, resgcn::scale(tp.upstream(self), s));
                         });
}

Var relu(Var x) {
  Tape& t = x.tape();
  t.mix_relu_pattern(x.value());
  const std::size_t ix = x.id();
  return t.record("relu", resgcn::relu(x.value()), {x}, [ix](Tape& tp, std::size_t self) {
    // Subgradient at 0 is 0.
    Tensor2 g = tp.upstream(self);
    const auto in = tp.value(ix).data();
    auto gd = g.data();
    for (std::size_t i = 0; i < gd.size(); ++i)
      if (!(in[i] > 0.0)) gd[i] = 0.0;
    tp.accumulate(ix, std::move(g));
  });
}

Var sigmoid(Var x) {
  const std::size_t ix = x.id();
  return x.tape().record("sigmoid", resgcn::sigmoid(x.value()), {x},
                         [ix](Tape& tp, std::size_t self) {
                           Tensor2 g = tp.upstream(self);
                           const auto y = tp.value(self).data();
                           auto gd = g.data();
                           for (std::size_t i = 0; i < gd.size(); ++i) gd[i] *= y[i] * (1.0 - y[i]);
                           tp.accumulate(ix, std::move(g));
                         });
}

Var exp_neg(Var x, double gamma) {
  const std::size_t ix = x.id();
  return x.tape().record("exp_neg", resgcn::exp_neg(x.value(), gamma), {x},
                         [ix, gamma](Tape& tp, std::size_t self) {
                           Tensor2 g = tp.upstream(self);
                           const auto y = tp.value(self).data();
                           auto gd = g.data();
                           for (std::size_t i = 0; i < gd.size(); ++i) gd[i] *= -gamma * y[i];
                           tp.accumulate(ix, std::move(g));
                         });
}

Var frobenius_sq(Var x) {
  const std::size_t ix = x.id();
  return x.tape().record("frobenius_sq", Tensor2(1, 1, resgcn::frobenius_sq(x.value())), {x},
                         [ix](Tape& tp, std::size_t self) {
                           const double g = tp.upstream(self)(0, 0);
                           tp.accumulate(ix, resgcn::scale(tp.value(ix), 2.0 * g));
                         });
}

Var weighted_sum(Var a, double wa, Var b, double wb) {
  if (a.value().size() != 1 || b.value().size() != 1) {
    fail(ErrorCode::kShape, "weighted_sum: operands must be 1x1");
  }
  const std::size_t ia = a.id(), ib = b.id();
  const double v = wa * a.value()(0, 0) + wb * b.value()(0, 0);
  return a.tape().record("weighted_sum", Tensor2(1, 1, v), {a, b},
                         [ia, ib, wa, wb](Tape& tp, std::size_t self) {
                           const double g = tp.upstream(self)(0, 0);
                           tp.accumulate(ia, Tensor2(1, 1, wa * g));
                           tp.accumulate(ib, Tensor2(1, 1, wb * g));
                         });
}

namespace {

// Streams the logits z_i·z_j one row at a time, so peak memory is O(n) rather
// than the O(n²) of a materialized reconstruction.
template <typename F>
void for_each_reconstruction_row(const Tensor2& z, const CsrMatrix& a, F&& per_row) {
  const std::size_t n = z.rows();
  std::vector<double> logits(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto zi = z.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto zj = z.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < zi.size(); ++k) acc += zi[k] * zj[k];
      logits[j] = acc;
    }
    per_row(i, logits, a.row_cols(i), a.row_values(i));
  }
}

}  // namespace

Var structure_error(Var z, const CsrMatrix& adjacency) {
  const Tensor2& zv = z.value();
  if (adjacency.rows != zv.rows() || adjacency.cols != zv.rows()) {
    fail(ErrorCode::kShape, "structure_error: adjacency (" + std::to_string(adjacency.rows) +
                                "x" + std::to_string(adjacency.cols) + ") vs embedding " +
                                zv.shape_string());
  }
  double total = 0.0;
  for_each_reconstruction_row(
      zv, adjacency,
      [&total](std::size_t, const std::vector<double>& logits, std::span<const std::size_t> cols,
               std::span<const double> vals) {
        std::size_t p = 0;
        double row = 0.0;
        for (std::size_t j = 0; j < logits.size(); ++j) {
          double target = 0.0;
          if (p < cols.size() && cols[p] == j) target = vals[p++];
          const double r = target - resgcn::sigmoid(logits[j]);
          row += r * r;
        }
        total += row;
      });
  const std::size_t iz = z.id();
  const CsrMatrix* ap = &adjacency;
  return z.tape().record(
      "structure_error", Tensor2(1, 1, total), {z},
      [iz, ap](Tape& tp, std::size_t self) {
        const double up = tp.upstream(self)(0, 0);
        const Tensor2& zt = tp.value(iz);
        Tensor2 g(zt.rows(), zt.cols());
        // dE/dlogit_ij = -2 (A_ij - s_ij) s_ij (1 - s_ij); logits are symmetric in
        // (i, j), so dE/dz_i = 2 * sum_j dE/dlogit_ij * z_j.
        for_each_reconstruction_row(
            zt, *ap,
            [&](std::size_t i, const std::vector<double>& logits,
                std::span<const std::size_t> cols, std::span<const double> vals) {
              std::size_t p = 0;
              auto gi = g.row(i);
              for (std::size_t j = 0; j < logits.size(); ++j) {
                double target = 0.0;
                if (p < cols.size() && cols[p] == j) target = vals[p++];
                const double s = resgcn::sigmoid(logits[j]);
                const double coef = 2.0 * up * (-2.0) * (target - s) * s * (1.0 - s);
                if (coef == 0.0) continue;
                const auto zj = zt.row(j);
                for (std::size_t k = 0; k < gi.size(); ++k) gi[k] += coef * zj[k];
              }
            });
        tp.accumulate(iz, std::move(g));
      });
}

}  // namespace resgcn::nn
