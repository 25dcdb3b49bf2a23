#include "resgcn/graph.hpp"

#include <algorithm>
#include <cmath>

#include "resgcn/error.hpp"

namespace resgcn {

AttributedGraph::AttributedGraph(std::size_t n, std::span<const Edge> edges,
                                 Tensor2 attributes, EdgeListStats* stats,
                                 std::vector<std::string> node_ids)
    : n_(n), attributes_(std::move(attributes)), node_ids_(std::move(node_ids)) {
  if (n_ == 0) fail(ErrorCode::kInvalidInput, "graph has no nodes");
  if (attributes_.rows() != n_) {
    fail(ErrorCode::kDimensionMismatch,
         "attribute matrix has " + std::to_string(attributes_.rows()) + " rows but graph has " +
             std::to_string(n_) + " nodes");
  }
  if (!attributes_.all_finite()) fail(ErrorCode::kInvalidInput, "attribute matrix has non-finite entries");
  if (!node_ids_.empty() && node_ids_.size() != n_) {
    fail(ErrorCode::kDimensionMismatch, "node_ids has " + std::to_string(node_ids_.size()) +
                                            " entries for " + std::to_string(n_) + " nodes");
  }

  EdgeListStats local;
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n_ || v >= n_) {
      fail(ErrorCode::kInvalidInput, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                         ") references a node outside 0.." +
                                         std::to_string(n_ - 1));
    }
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  const auto last = std::unique(canon.begin(), canon.end());
  local.duplicates = static_cast<std::size_t>(canon.end() - last);
  canon.erase(last, canon.end());
  if (stats != nullptr) *stats = local;

  std::vector<Triplet> trip;
  trip.reserve(2 * canon.size());
  for (auto [u, v] : canon) {
    trip.push_back({u, v, 1.0});
    trip.push_back({v, u, 1.0});
  }
  adjacency_ = csr_from_triplets(n_, n_, std::move(trip));
}

std::vector<Edge> AttributedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v : adjacency_.row_cols(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool AttributedGraph::has_edge(std::size_t u, std::size_t v) const {
  if (u >= n_ || v >= n_) return false;
  return adjacency_.at(u, v) != 0.0;
}

AttributedGraph AttributedGraph::with_attributes(Tensor2 attributes) const {
  const auto e = edges();
  return AttributedGraph(n_, e, std::move(attributes), nullptr, node_ids_);
}

AttributedGraph AttributedGraph::with_edges_added(std::span<const Edge> extra) const {
  auto e = edges();
  e.insert(e.end(), extra.begin(), extra.end());
  return AttributedGraph(n_, e, attributes_, nullptr, node_ids_);
}

NormalizedAdjacency normalize_adjacency(const AttributedGraph& g) {
  const std::size_t n = g.node_count();
  const CsrMatrix& a = g.adjacency();
  NormalizedAdjacency out;
  out.degree.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.degree[i] = 1.0 + static_cast<double>(g.degree(i));

  CsrMatrix& s = out.matrix;
  s.rows = n;
  s.cols = n;
  s.row_ptr.assign(n + 1, 0);
  s.col_idx.reserve(a.nnz() + n);
  s.values.reserve(a.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    bool diag_done = false;
    const auto emit = [&](std::size_t j) {
      s.col_idx.push_back(j);
      s.values.push_back(1.0 / std::sqrt(out.degree[i] * out.degree[j]));
    };
    for (std::size_t j : a.row_cols(i)) {
      if (!diag_done && j > i) {
        emit(i);
        diag_done = true;
      }
      emit(j);
    }
    if (!diag_done) emit(i);
    s.row_ptr[i + 1] = s.col_idx.size();
  }
  return out;
}

}  // namespace resgcn
