#include "resgcn/synth.hpp"

#include <algorithm>
#include <set>

#include "resgcn/error.hpp"
#include "resgcn/rng.hpp"

namespace resgcn {

SbmGraph make_sbm(const SbmSpec& spec) {
  if (spec.nodes == 0 || spec.blocks == 0 || spec.blocks > spec.nodes) {
    fail(ErrorCode::kInvalidArgument, "sbm: need 1 <= blocks <= nodes");
  }
  if (spec.p_in < 0 || spec.p_in > 1 || spec.p_out < 0 || spec.p_out > 1) {
    fail(ErrorCode::kInvalidArgument, "sbm: probabilities must lie in [0, 1]");
  }
  Rng rng(spec.seed);
  std::vector<std::size_t> block(spec.nodes);
  for (std::size_t i = 0; i < spec.nodes; ++i) block[i] = i * spec.blocks / spec.nodes;

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < spec.nodes; ++u) {
    for (std::size_t v = u + 1; v < spec.nodes; ++v) {
      if (rng.bernoulli(block[u] == block[v] ? spec.p_in : spec.p_out)) edges.emplace_back(u, v);
    }
  }

  Tensor2 means(spec.blocks, spec.dim);
  for (double& m : means.data()) m = spec.mean_scale * rng.normal();
  Tensor2 x(spec.nodes, spec.dim);
  for (std::size_t i = 0; i < spec.nodes; ++i)
    for (std::size_t j = 0; j < spec.dim; ++j) x(i, j) = means(block[i], j) + spec.noise * rng.normal();

  return SbmGraph{AttributedGraph(spec.nodes, edges, std::move(x)), std::move(block)};
}

AttributedGraph make_random_graph(std::size_t nodes, std::size_t edges, std::size_t dim,
                                  std::uint64_t seed) {
  if (nodes == 0) fail(ErrorCode::kInvalidArgument, "random graph: nodes must be >= 1");
  Rng rng(seed);
  const std::size_t max_edges = nodes * (nodes - 1) / 2;
  edges = std::min(edges, max_edges);
  std::set<Edge> chosen;
  while (chosen.size() < edges) {
    std::size_t u = rng.below(nodes), v = rng.below(nodes);
    if (u == v) continue;
    chosen.insert(std::minmax(u, v));
  }
  Tensor2 x(nodes, dim);
  for (double& e : x.data()) e = rng.normal();
  std::vector<Edge> list(chosen.begin(), chosen.end());
  return AttributedGraph(nodes, list, std::move(x));
}

}  // namespace resgcn
