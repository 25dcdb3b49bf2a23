#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "resgcn/sparse.hpp"
#include "resgcn/tensor.hpp"

namespace resgcn::nn {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape
/// lives and has not been cleared.
class Var {
 public:
  Var() = default;

  bool valid() const noexcept { return tape_ != nullptr; }
  std::size_t id() const noexcept { return id_; }
  Tape& tape() const { return *tape_; }
  const Tensor2& value() const;
  /// Gradient from the most recent Tape::backward; zeros if this value did not
  /// influence the loss.
  Tensor2 grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Linear record of a forward computation, replayed in reverse by backward().
class Tape {
 public:
  using Backprop = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor2 value);
  Var leaf(Tensor2 value);
  /// Appends an op result. Non-finite values raise ErrorCode::kNumeric naming `op`.
  Var record(std::string_view op, Tensor2 value, std::initializer_list<Var> parents,
             Backprop backprop);

  /// Reverse sweep from a 1x1 loss. Throws ErrorCode::kState on an empty tape or
  /// a handle from another tape.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  const Tensor2& value(std::size_t id) const { return nodes_[id].value; }
  Tensor2 grad(std::size_t id) const;
  /// Gradient arriving at `id` during backward (only valid inside a Backprop).
  const Tensor2& upstream(std::size_t id) const { return nodes_[id].grad; }
  void accumulate(std::size_t id, Tensor2 g);

  /// Running hash of every ReLU's active/inactive pattern since the last clear.
  /// Finite-difference checks use it to reject probes that straddle a kink.
  std::uint64_t relu_pattern() const noexcept { return relu_pattern_; }
  void mix_relu_pattern(const Tensor2& pre_activation);

  void clear();

 private:
  struct Node {
    Tensor2 value;
    Tensor2 grad;
    bool requires_grad = false;
    Backprop backprop;
  };

  std::vector<Node> nodes_;
  std::uint64_t relu_pattern_ = 0xcbf29ce484222325ULL;
};

Var matmul(Var a, Var b);
/// a·bᵀ
Var matmul_nt(Var a, Var b);
Var spmm(const CsrMatrix& s, Var h);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
Var scale(Var a, double s);
Var relu(Var x);
Var sigmoid(Var x);
Var exp_neg(Var x, double gamma);
/// ||x||_F² as a 1x1 value.
Var frobenius_sq(Var x);
/// wa·a + wb·b for 1x1 operands.
Var weighted_sum(Var a, double wa, Var b, double wb);
/// ||A - sigmoid(z·zᵀ)||_F² without materializing the n×n reconstruction.
/// `adjacency` must be symmetric.
Var structure_error(Var z, const CsrMatrix& adjacency);

}  // namespace resgcn::nn
