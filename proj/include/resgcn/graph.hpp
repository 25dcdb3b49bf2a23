#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resgcn/sparse.hpp"
#include "resgcn/tensor.hpp"

namespace resgcn {

using Edge = std::pair<std::size_t, std::size_t>;
/// Ground-truth anomaly labels, one 0/1 entry per node.
using Labels = std::vector<int>;

struct EdgeListStats {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// Undirected attributed network G = {A, X}.
///
/// Immutable once built. The adjacency is stored as a symmetric 0/1 CSR matrix
/// with an empty diagonal; each undirected edge appears twice in storage and
/// once in edge_count().
class AttributedGraph {
 public:
  /// Self-loops are dropped and duplicate/reversed pairs merged; `stats`, when
  /// given, receives the counts. Throws kInvalidInput for n == 0, out-of-range
  /// endpoints or non-finite attributes, kDimensionMismatch if attributes does
  /// not have n rows.
  AttributedGraph(std::size_t n, std::span<const Edge> edges, Tensor2 attributes,
                  EdgeListStats* stats = nullptr, std::vector<std::string> node_ids = {});

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return adjacency_.nnz() / 2; }
  std::size_t dim() const noexcept { return attributes_.cols(); }

  const CsrMatrix& adjacency() const noexcept { return adjacency_; }
  const Tensor2& attributes() const noexcept { return attributes_; }
  const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }

  /// Canonical edge list: u < v, sorted lexicographically.
  std::vector<Edge> edges() const;
  bool has_edge(std::size_t u, std::size_t v) const;
  std::size_t degree(std::size_t v) const { return adjacency_.row_cols(v).size(); }

  AttributedGraph with_attributes(Tensor2 attributes) const;
  AttributedGraph with_edges_added(std::span<const Edge> extra) const;

  friend bool operator==(const AttributedGraph&, const AttributedGraph&) = default;

 private:
  std::size_t n_ = 0;
  CsrMatrix adjacency_;
  Tensor2 attributes_;
  std::vector<std::string> node_ids_;
};

/// S = D̃^(-1/2) (A + I) D̃^(-1/2), with D̃[i,i] = 1 + degree(i).
struct NormalizedAdjacency {
  CsrMatrix matrix;
  std::vector<double> degree;  // diagonal of D̃
};

NormalizedAdjacency normalize_adjacency(const AttributedGraph& g);

}  // namespace resgcn
